//! Time evolution of the ultradiscrete KdV equation.
//!
//! Two independent formulations are provided and must always agree:
//!
//! * the min-formula, `U^{t+1}_i = min(1 - U^t_i, sum_{j<i}(U^t_j - U^{t+1}_j))`
//!   swept left to right (and its mirror image for the downdate), and
//! * the cell-overflow cascade: `U^{t+1}_i + U^t_i = R(U^t_{i-1} + U^t_i)_i`,
//!   where `R` pushes whatever exceeds capacity 1 in a cell into its right
//!   neighbour (`L` pushes it left for the downdate).

use num_traits::Zero;

use crate::rational::{self, one, Rational};
use crate::state::{joint_span, State};

/// Forward time step `U^t -> U^{t+1}`.
pub fn update(s: &State) -> State {
    let Some((lo, hi)) = s.support() else {
        return State::zero();
    };
    // carry = sum_{j<i} (U^t_j - U^{t+1}_j)
    let mut carry = Rational::zero();
    let mut out = Vec::with_capacity(s.cells().len() + 2);
    let mut i = lo;
    while i <= hi || !carry.is_zero() {
        let u = s.get(i);
        let next = rational::min(one() - &u, carry.clone());
        carry += u - &next;
        out.push(next);
        i += 1;
    }
    State::new(lo, out)
}

/// Backward time step `U^t -> U^{t-1}`, the exact inverse of [`update`].
pub fn downdate(s: &State) -> State {
    let Some((lo, hi)) = s.support() else {
        return State::zero();
    };
    // carry = sum_{j>i} (U^t_j - U^{t-1}_j)
    let mut carry = Rational::zero();
    let mut rev = Vec::with_capacity(s.cells().len() + 2);
    let mut i = hi;
    while i >= lo || !carry.is_zero() {
        let u = s.get(i);
        let prev = rational::min(one() - &u, carry.clone());
        carry += u - &prev;
        rev.push(prev);
        i -= 1;
    }
    rev.reverse();
    State::new(i + 1, rev)
}

/// Applies [`update`] `steps` times, or [`downdate`] `-steps` times.
pub fn evolve(s: &State, steps: i64) -> State {
    let mut cur = s.clone();
    if steps >= 0 {
        for _ in 0..steps {
            cur = update(&cur);
        }
    } else {
        for _ in 0..(-steps) {
            cur = downdate(&cur);
        }
    }
    cur
}

/// Every state from `t = 0` to `t = steps` (inclusive), forward or backward.
pub fn trajectory(s: &State, steps: i64) -> Vec<State> {
    let mut out = vec![s.clone()];
    for _ in 0..steps.unsigned_abs() {
        let last = out.last().unwrap();
        let next = if steps >= 0 { update(last) } else { downdate(last) };
        out.push(next);
    }
    out
}

/// The overflow operator `R = ... R_3 R_2 R_1 ...`: sweeping left to right,
/// each cell keeps at most 1 and hands its excess to the next cell.
pub fn r_cascade(a: &State) -> State {
    let Some((lo, hi)) = a.support() else {
        return State::zero();
    };
    let mut excess = Rational::zero();
    let mut out = Vec::with_capacity(a.cells().len() + 2);
    let mut i = lo;
    while i <= hi || !excess.is_zero() {
        let cur = a.get(i) + &excess;
        let kept = rational::min(one(), cur.clone());
        excess = cur - &kept;
        out.push(kept);
        i += 1;
    }
    State::new(lo, out)
}

/// Mirror image of [`r_cascade`]: excess capacity moves left.
pub fn l_cascade(a: &State) -> State {
    let Some((lo, hi)) = a.support() else {
        return State::zero();
    };
    let mut excess = Rational::zero();
    let mut rev = Vec::with_capacity(a.cells().len() + 2);
    let mut i = hi;
    while i >= lo || !excess.is_zero() {
        let cur = a.get(i) + &excess;
        let kept = rational::min(one(), cur.clone());
        excess = cur - &kept;
        rev.push(kept);
        i -= 1;
    }
    rev.reverse();
    State::new(i + 1, rev)
}

/// Update through the overflow cascade: `U^{t+1}_i = R(U_{i-1} + U_i)_i - U_i`.
pub fn update_via_r(s: &State) -> State {
    let pair_sums = s + &s.shifted(1);
    &r_cascade(&pair_sums) - s
}

/// Downdate through the leftward cascade: `U^{t-1}_i = L(U_i + U_{i+1})_i - U_i`.
pub fn downdate_via_l(s: &State) -> State {
    let pair_sums = s + &s.shifted(-1);
    &l_cascade(&pair_sums) - s
}

pub fn total_mass(s: &State) -> Rational {
    s.total_mass()
}

/// Maximal local sum `V = max_i (U_i + U_{i+1})`; zero pairs far away make it
/// nonnegative.
pub fn local_sum_max(s: &State) -> Rational {
    let Some((lo, hi)) = s.support() else {
        return Rational::zero();
    };
    (lo - 1..=hi)
        .map(|i| s.get(i) + s.get(i + 1))
        .fold(Rational::zero(), rational::max)
}

/// First index where `max(U'_i - 1, -U'_{i+1}) = max(U_{i+1} - 1, -U_i)` fails,
/// with `U = prev` and `U' = next`.
pub fn naive_violation(prev: &State, next: &State) -> Option<i64> {
    let (lo, hi) = joint_span([prev, next])?;
    (lo - 1..=hi).find(|&i| {
        let lhs = rational::max(next.get(i) - one(), -next.get(i + 1));
        let rhs = rational::max(prev.get(i + 1) - one(), -prev.get(i));
        lhs != rhs
    })
}

/// Whether `(prev, next)` satisfies the naive ultradiscrete KdV relation at
/// every index.
pub fn naive_check(prev: &State, next: &State) -> bool {
    naive_violation(prev, next).is_none()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn st(s: &str) -> State {
        s.parse().unwrap()
    }

    /// Literal min-formula with explicit sums, no carry bookkeeping.
    fn brute_update(s: &State) -> State {
        let (lo, hi) = s.span();
        let spread: Rational = s.iter().map(|(_, v)| rational::abs(v)).sum();
        let reach = hi + 3 + rational::ceil_i64(&spread);
        let mut next: Vec<Rational> = Vec::new();
        for i in lo..reach {
            let mut acc = Rational::zero();
            for j in lo..i {
                acc += s.get(j) - &next[(j - lo) as usize];
            }
            next.push(rational::min(one() - s.get(i), acc));
        }
        State::new(lo, next)
    }

    #[test]
    fn update_matches_worked_example() {
        let s = st("0 0 0 0 0 1 1/2 0 1");
        let expected = st("0 0 0 0 0 0 1/2 1 0 1");
        assert_eq!(update(&s), expected);
    }

    #[test]
    fn downdate_matches_worked_example() {
        let s = st("0 0 0 1 1/2 0 1/2 1 1 -1/2 0 0");
        let expected = st("0 1 1 0 1/2 1 1/2 0 -1/2 0 0 0");
        assert_eq!(downdate(&s), expected);
        assert_eq!(downdate_via_l(&s), expected);
        assert_eq!(total_mass(&s), rat(7, 2));
    }

    #[test]
    fn overfull_single_cell() {
        // 22/7 stands in for an irrational overfull cell.
        let s = State::new(2, vec![rat(22, 7)]);
        let mut cells = vec![rat(-15, 7)];
        cells.extend(std::iter::repeat(int(1)).take(5));
        cells.push(rat(2, 7));
        let expected = State::new(2, cells);
        assert_eq!(update(&s), expected);
        assert_eq!(brute_update(&s), expected);
        assert_eq!(update_via_r(&s), expected);
        assert_eq!(total_mass(&update(&s)), rat(22, 7));
    }

    #[test]
    fn r_cascade_examples() {
        let a = st("0 1/2 5/2 -1/6 -1/3 0");
        assert_eq!(r_cascade(&a), st("0 1/2 1 1 0 0"));
        let b = st("1/2 1 -3 1");
        assert_eq!(r_cascade(&b), b);
        assert_eq!(r_cascade(&st("3 0 0 0")), st("1 1 1 0"));
    }

    #[test]
    fn trivial_state_is_fixed() {
        let z = State::zero();
        assert_eq!(update(&z), z);
        assert_eq!(downdate(&z), z);
        assert_eq!(local_sum_max(&z), Rational::zero());
    }

    #[test]
    fn local_sums() {
        assert_eq!(local_sum_max(&st("1 1")), int(2));
        assert_eq!(local_sum_max(&st("@9 -1/2 0 0 -1/3 0 -1")), int(0));
        assert_eq!(local_sum_max(&st("0 0 0 1/2 1 0 1/2 1 0 1 1/2")), rat(3, 2));
    }

    #[test]
    fn naive_relation() {
        let s = st("0 0 0 1 1/2 0 1/2 1 1 -1/2");
        assert!(naive_check(&s, &update(&s)));
        assert!(naive_check(&downdate(&s), &s));
        // V <= 1 states translate rigidly.
        let slow = st("1/2 1/3 0 -1 1/4");
        assert!(local_sum_max(&slow) <= one());
        assert_eq!(update(&slow), slow.shifted(1));
        assert!(naive_check(&slow, &slow.shifted(1)));
        let mut bumped = update(&s).cells().to_vec();
        bumped[1] += rat(1, 3);
        let wrong = State::new(update(&s).origin(), bumped);
        assert!(!naive_check(&s, &wrong));
    }
}

//! Ultradiscrete conserved densities `X`, `Y` and the maximal-mass blocks.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::evolve::{downdate, update};
use crate::rational::{self, Rational};
use crate::state::{joint_span, State};

/// Inclusive index range `[left, right]` on which `X` attains its maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub left: i64,
    pub right: i64,
}

impl Block {
    pub fn contains(&self, i: i64) -> bool {
        self.left <= i && i <= self.right
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConservedProfile {
    /// `X_i = sum_{j>=i} (U^{t+1}_j - U^{t-1}_j)`
    pub x: State,
    /// `Y_i = sum_{j>i} U^t_j - sum_{j>=i} U^{t-1}_j`
    pub y: State,
    pub omega_max: Rational,
    pub kappa_max: Rational,
    pub c_max: Rational,
    /// Left to right; empty exactly when `omega_max == 0`.
    pub blocks: Vec<Block>,
}

impl ConservedProfile {
    pub fn max_y(&self) -> Rational {
        self.y
            .iter()
            .map(|(_, v)| v.clone())
            .fold(Rational::zero(), rational::max)
    }

    /// Block at `index`, or `BlockOutOfRange`.
    pub fn block(&self, index: usize) -> Result<Block> {
        self.blocks
            .get(index)
            .copied()
            .ok_or(Error::BlockOutOfRange {
                index,
                count: self.blocks.len(),
            })
    }

    /// Index range covering the nonzero parts of `x` and `y`.
    pub fn span(&self) -> Option<(i64, i64)> {
        joint_span([&self.x, &self.y])
    }
}

/// Profile of `s`, computing its update and downdate internally.
pub fn profile(s: &State) -> ConservedProfile {
    profile_from(&downdate(s), s, &update(s))
}

/// Profile from three consecutive time slices `U^{t-1}, U^t, U^{t+1}`.
pub fn profile_from(prev: &State, cur: &State, next: &State) -> ConservedProfile {
    let Some((lo, hi)) = joint_span([prev, cur, next]) else {
        return ConservedProfile {
            x: State::zero(),
            y: State::zero(),
            omega_max: Rational::zero(),
            kappa_max: Rational::zero(),
            c_max: Rational::one(),
            blocks: Vec::new(),
        };
    };
    let n = (hi - lo) as usize;
    let mut x = vec![Rational::zero(); n];
    let mut y = vec![Rational::zero(); n];
    let mut acc_x = Rational::zero();
    let mut above_cur = Rational::zero();
    let mut from_prev = Rational::zero();
    for k in (0..n).rev() {
        let i = lo + k as i64;
        acc_x += next.get(i) - prev.get(i);
        x[k] = acc_x.clone();
        from_prev += prev.get(i);
        y[k] = &above_cur - &from_prev;
        above_cur += cur.get(i);
    }
    let omega_max = x.iter().cloned().fold(Rational::zero(), rational::max);
    let mut blocks = Vec::new();
    if omega_max > Rational::zero() {
        let mut k = 0;
        while k < n {
            if x[k] == omega_max {
                let start = k;
                while k + 1 < n && x[k + 1] == omega_max {
                    k += 1;
                }
                blocks.push(Block {
                    left: lo + start as i64,
                    right: lo + k as i64,
                });
            }
            k += 1;
        }
    }
    ConservedProfile {
        x: State::new(lo, x),
        y: State::new(lo, y),
        kappa_max: rational::min(Rational::one(), omega_max.clone()),
        c_max: rational::max(Rational::one(), omega_max.clone()),
        omega_max,
        blocks,
    }
}

/// Evolves `s` forward `steps` times and checks, at every slice, the
/// theorems about `X` and `Y`:
///
/// * `max X`, `max Y` and the number of maximal blocks never change;
/// * `Y >= 0`, `U^t + U^{t-1} <= kappa_max`, and `omega_max = 1 + max Y`
///   when `omega_max > 1`;
/// * `dX_i > 0 => U^t_i + U^{t+1}_i < kappa_max` and
///   `dX_i < 0 => U^t_i + U^{t-1}_i < kappa_max`;
/// * at every global maximum `m`, `U^t_{m-1} + U^{t-1}_{m-1} = kappa_max`;
/// * at every local maximum `X_m > 1`, the two disjunctions around `m`;
/// * block edges are tracked from one slice to the next within one cell.
///
/// Returns the first violated law as an `InvariantBreach`.
pub fn assert_profile_laws(s: &State, steps: usize) -> Result<()> {
    let mut slices = vec![downdate(s), s.clone(), update(s)];
    let first = profile_from(&slices[0], &slices[1], &slices[2]);
    let mut before: Option<ConservedProfile> = None;
    for t in 0..=steps {
        if t > 0 {
            let next = update(slices.last().unwrap());
            slices.remove(0);
            slices.push(next);
        }
        let (prev, cur, next) = (&slices[0], &slices[1], &slices[2]);
        let p = profile_from(prev, cur, next);
        check_slice(t, prev, cur, next, &p, &first, before.as_ref())?;
        before = Some(p);
    }
    Ok(())
}

fn check_slice(
    t: usize,
    prev: &State,
    cur: &State,
    next: &State,
    p: &ConservedProfile,
    first: &ConservedProfile,
    before: Option<&ConservedProfile>,
) -> Result<()> {
    let fail = |law: &str, i: Option<i64>| {
        let at = i.map(|i| format!(" at i = {i}")).unwrap_or_default();
        Err(Error::breach(format!("t = {t}: {law}{at}")))
    };
    let one = Rational::one();
    let kappa = &p.kappa_max;
    if p.omega_max != first.omega_max {
        return fail("max X changed", None);
    }
    if p.max_y() != first.max_y() {
        return fail("max Y changed", None);
    }
    if p.blocks.len() != first.blocks.len() {
        return fail("number of maximal blocks changed", None);
    }
    if p.omega_max > one && p.omega_max != &one + p.max_y() {
        return fail("omega_max != 1 + max Y", None);
    }
    let Some((lo, hi)) = joint_span([prev, cur, next]) else {
        return Ok(());
    };
    for i in lo - 2..=hi + 1 {
        let (u, up, un) = (cur.get(i), prev.get(i), next.get(i));
        if p.y.get(i) < Rational::zero() {
            return fail("Y < 0", Some(i));
        }
        if &u + &up > *kappa {
            return fail("U^t + U^{t-1} > kappa_max", Some(i));
        }
        let dx = p.x.get(i + 1) - p.x.get(i);
        if dx > Rational::zero() && &u + &un >= *kappa {
            return fail("dX > 0 but U^t + U^{t+1} >= kappa_max", Some(i));
        }
        if dx < Rational::zero() && &u + &up >= *kappa {
            return fail("dX < 0 but U^t + U^{t-1} >= kappa_max", Some(i));
        }
        let xm = p.x.get(i);
        if p.omega_max > Rational::zero()
            && xm == p.omega_max
            && cur.get(i - 1) + prev.get(i - 1) != *kappa
        {
            return fail("U^t_{m-1} + U^{t-1}_{m-1} != kappa_max at a maximum", Some(i));
        }
        if xm > one && p.x.get(i - 1) <= xm && p.x.get(i + 1) <= xm {
            let wide = cur.get(i - 1) + &u >= one;
            let right = &up + &u == one;
            let left = cur.get(i - 1) + next.get(i - 1) == one;
            if !((wide || right) && (wide || left)) {
                return fail("local maximum X_m > 1 without saturated neighbours", Some(i));
            }
        }
        if let Some(b) = before {
            // b is the profile one step earlier
            if dx < Rational::zero() && b.x.get(i) >= p.omega_max && p.omega_max > Rational::zero() {
                return fail("dX^t_i < 0 but X^{t-1}_i is maximal", Some(i));
            }
            let dx_before = b.x.get(i + 1) - b.x.get(i);
            if dx_before > Rational::zero()
                && p.x.get(i + 1) >= p.omega_max
                && p.omega_max > Rational::zero()
            {
                return fail("dX^{t-1}_i > 0 but X^t_{i+1} is maximal", Some(i));
            }
        }
    }
    if let Some(b) = before {
        for blk in &p.blocks {
            if b.x.get(blk.left - 1) != p.omega_max {
                return fail("no maximal X^{t-1} just left of block", Some(blk.left));
            }
        }
        for blk in &b.blocks {
            if p.x.get(blk.right + 1) != p.omega_max {
                return fail("no maximal X^t just right of earlier block", Some(blk.right));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn st(s: &str) -> State {
        s.parse().unwrap()
    }

    /// Direct transcription of the defining sums.
    fn brute_x(prev: &State, next: &State, i: i64) -> Rational {
        next.sum_from(i) - prev.sum_from(i)
    }

    fn brute_y(prev: &State, cur: &State, i: i64) -> Rational {
        cur.sum_from(i + 1) - prev.sum_from(i)
    }

    #[test]
    fn first_table() {
        let s = st("0 0 0 0 1 1 0 1 1 0 0 0 0 1 1 1 0 0 0 0");
        assert_eq!(downdate(&s), st("0 1 1 1 0 0 1 0 0 0 1 1 1"));
        assert_eq!(update(&s), st("0 0 0 0 0 0 1 0 0 1 1 1 0 0 0 0 1 1 1"));
        let p = profile(&s);
        assert_eq!(p.x, st("0 0 1 2 3 3 3 3 3 3 2 2 2 3 3 3 3 2 1 0"));
        assert_eq!(p.omega_max, int(3));
        assert_eq!(
            p.blocks,
            vec![Block { left: 5, right: 10 }, Block { left: 14, right: 17 }]
        );
        assert_eq!(p.max_y(), int(2));
    }

    #[test]
    fn second_table() {
        let s = st("0 0 0 0 1 1 0 0 1 1");
        let p = profile(&s);
        assert_eq!(p.x, st("0 0 0 1 2 2 2 2 2 2 2 1"));
        assert_eq!(p.blocks, vec![Block { left: 5, right: 11 }]);
    }

    #[test]
    fn third_table() {
        let s = st("0 0 -1/2 1/3 5/3 0 0 1");
        assert_eq!(downdate(&s), st("0 0 3/2 2/3 -2/3 0 1"));
        assert_eq!(update(&s), st("0 0 0 -1/2 -2/3 1 1 0 1 2/3"));
        let p = profile(&s);
        assert_eq!(p.x, st("0 0 0 3/2 8/3 8/3 5/3 5/3 5/3 2/3"));
        assert_eq!(p.omega_max, rat(8, 3));
        assert_eq!(p.kappa_max, int(1));
        assert_eq!(p.c_max, rat(8, 3));
        assert_eq!(p.blocks, vec![Block { left: 5, right: 6 }]);
    }

    #[test]
    fn densities_match_definitions() {
        let s = st("1/2 -1 7/3 0 1 1/4 -2/5 1");
        let (prev, next) = (downdate(&s), update(&s));
        let p = profile(&s);
        for i in -5..20 {
            assert_eq!(p.x.get(i), brute_x(&prev, &next, i), "X at {i}");
            assert_eq!(p.y.get(i), brute_y(&prev, &s, i), "Y at {i}");
        }
    }

    #[test]
    fn trivial_profile() {
        let p = profile(&State::zero());
        assert!(p.x.is_trivial() && p.y.is_trivial());
        assert_eq!(p.omega_max, Rational::zero());
        assert!(p.blocks.is_empty());
        assert!(assert_profile_laws(&State::zero(), 5).is_ok());
        assert!(matches!(p.block(0), Err(Error::BlockOutOfRange { index: 0, count: 0 })));
    }

    #[test]
    fn background_has_no_mass() {
        let b = st("@9 -1/2 0 0 -1/3 0 -1");
        let p = profile(&b);
        assert_eq!(p.omega_max, Rational::zero());
        assert!(p.y.is_trivial());
    }

    #[test]
    fn slow_states_have_omega_equal_v() {
        let s = st("1/2 1/3 0 -1 1/4 1/2");
        let p = profile(&s);
        assert_eq!(p.omega_max, crate::evolve::local_sum_max(&s));
        assert!(p.y.is_trivial());
    }

    #[test]
    fn laws_hold_on_worked_example() {
        let s = st("0 0 0 2/3 2/3 -1/2 1 1/2 1 1 0 0 -1/3 1 1 1 -1 1 1 1");
        assert_eq!(assert_profile_laws(&s, 20), Ok(()));
    }
}

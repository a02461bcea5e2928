//! Adding and removing one soliton by Darboux transformation.
//!
//! With a solution `(Theta^t, Theta^{t+1})` of the linear system of `U`,
//!
//! ```text
//! ~U_i = U_i + Theta^t_{i+1} + Theta^{t+1}_i - Theta^t_i - Theta^{t+1}_{i+1}
//! ```
//!
//! is again a solution of udKdV. A generic eigenfunction adds a soliton of
//! mass `omega`; the bound state at `omega_max` removes one.

use num_traits::{One, Zero};

use crate::eigen::{self, generic_from, verify_linear_system, Eigenfunction, Slices, SolitonParams, Violation};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::state::{joint_span, State};

fn transform(s: &State, e0: &Eigenfunction, e1: &Eigenfunction) -> State {
    let (a0, b0) = e0.window();
    let (a1, b1) = e1.window();
    let (sa, sb) = s.span();
    let lo = a0.min(a1).min(sa) - 1;
    let hi = b0.max(b1).max(sb) + 1;
    State::from_fn(lo, hi, |i| s.get(i) + e0.at(i + 1) + e1.at(i) - e0.at(i) - e1.at(i + 1))
}

/// Adds the soliton `p` to `s = U^t`. Requires `0 < omega` and
/// `omega >= omega_max(s)`; the total mass grows by exactly `omega`.
pub fn dress_state(s: &State, t: i64, p: &SolitonParams) -> Result<State> {
    if p.omega <= Rational::zero() {
        return Err(Error::DegenerateOmega(p.omega.clone()));
    }
    let sl = Slices::of(s);
    if p.omega < sl.profile.omega_max {
        return Err(Error::MassTooSmall {
            omega: p.omega.clone(),
            omega_max: sl.profile.omega_max.clone(),
        });
    }
    let e0 = generic_from(&sl.prev, s, t, p)?;
    let e1 = generic_from(s, &sl.next, t + 1, p)?;
    if let Err(v) = verify_linear_system(s, &e0, &e1, p) {
        return Err(Error::breach(format!("dressing eigenfunction: {v}")));
    }
    let out = transform(s, &e0, &e1);
    if let Err(v) = dt_identity_check(s, &out, &e0) {
        return Err(Error::breach(format!("dressing: {v}")));
    }
    if out.total_mass() != s.total_mass() + &p.omega {
        return Err(Error::breach("dressing changed the mass by the wrong amount"));
    }
    Ok(out)
}

/// Removes the soliton carried by maximal block `block` of `s = U^t`:
/// `^U_i = U^{t+1}_i` left of the block's first index `m`, `U^{t-1}_i` from
/// `m` on. Returns the undressed state and the soliton's `(omega, phi)`.
pub fn undress_state(s: &State, t: i64, block: usize) -> Result<(State, SolitonParams)> {
    let sl = Slices::of(s);
    let pair = eigen::bound_pair_from(&sl, t, block)?;
    undress_with(s, &sl, pair)
}

/// [`undress_state`] split at any index `m` of a maximal block; all indices
/// of one block give the same result.
pub fn undress_state_at(s: &State, t: i64, m: i64) -> Result<(State, SolitonParams)> {
    let sl = Slices::of(s);
    let pair = eigen::bound_pair_split(&sl, t, m)?;
    undress_with(s, &sl, pair)
}

fn undress_with(
    s: &State,
    sl: &Slices,
    (e0, e1, p): (Eigenfunction, Eigenfunction, SolitonParams),
) -> Result<(State, SolitonParams)> {
    let m = e0.split;
    let (lo, hi) = joint_span([&sl.prev, &sl.next]).unwrap_or((m, m));
    let out = State::from_fn(lo.min(m), hi.max(m), |i| {
        if i < m {
            sl.next.get(i)
        } else {
            sl.prev.get(i)
        }
    });
    if transform(s, &e0, &e1) != out {
        return Err(Error::breach("undressing disagrees with the bound-state transformation"));
    }
    if let Err(v) = dt_identity_check(s, &out, &e0) {
        return Err(Error::breach(format!("undressing: {v}")));
    }
    if out.total_mass() + &p.omega != s.total_mass() {
        return Err(Error::breach("undressing changed the mass by the wrong amount"));
    }
    Ok((out, p))
}

/// Checks `max(~U_{i-1} - 1, -~U_i) = 2 Theta_i - Theta_{i+1} - Theta_{i-1} +
/// max(U_{i-1} - 1, -U_i)` for the state `s`, its transform `dressed` and
/// the slice `theta` used at the same time.
pub fn dt_identity_check(s: &State, dressed: &State, theta: &Eigenfunction) -> Result<(), Violation> {
    let (a, b) = theta.window();
    let (lo, hi) = joint_span([s, dressed]).map_or((a, b), |(l, h)| (l.min(a), h.max(b)));
    let one = Rational::one();
    let two = Rational::from_integer(2.into());
    for i in lo - 2..hi + 2 {
        let lhs = rational::max(dressed.get(i - 1) - &one, -dressed.get(i));
        let rhs = &two * theta.at(i) - theta.at(i + 1) - theta.at(i - 1)
            + rational::max(s.get(i - 1) - &one, -s.get(i));
        if lhs != rhs {
            return Err(Violation { equation: 0, index: i });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conserved::profile;
    use crate::evolve::update;
    use crate::rational::{int, rat};

    fn st(s: &str) -> State {
        s.parse().unwrap()
    }

    #[test]
    fn dressing_example() {
        let s = st("0 0 0 0 0 1 1/2 0 1");
        let p = SolitonParams::new(int(2), int(7));
        let d = dress_state(&s, 0, &p).unwrap();
        assert_eq!(d, st("0 0 0 1/2 1 0 1/2 1 0 1 1/2"));
        let x = profile(&d).x;
        assert_eq!(x, st("0 0 1/2 3/2 2 2 2 2 2 2 2 3/2 1/2"));
    }

    #[test]
    fn undressing_examples() {
        let (u, p) = undress_state(&st("0 0 0 1/2 1 0 1/2 1 0 1 1/2"), 0, 0).unwrap();
        assert_eq!(u, st("0 0 0 0 0 1 1/2 0 1"));
        assert_eq!(p, SolitonParams::new(int(2), int(7)));
        let (u, p) = undress_state(&u, 0, 0).unwrap();
        assert_eq!(u, st("@8 1"));
        assert_eq!(p, SolitonParams::new(rat(3, 2), int(7)));
        let (u, p) = undress_state(&u, 0, 0).unwrap();
        assert_eq!(u, State::zero());
        assert_eq!(p, SolitonParams::new(int(1), int(8)));
        assert!(matches!(undress_state(&u, 0, 0), Err(Error::NoSoliton)));
    }

    #[test]
    fn split_anywhere_in_the_block() {
        let s = st("0 0 0 2/3 2/3 -1/2 1 1/2 1 1 0 0 -1/3 1 1 1 -1 1 1 1");
        let expect = undress_state(&s, 0, 1).unwrap();
        assert_eq!(expect.1, SolitonParams::new(int(3), int(12)));
        for m in 15..=21 {
            assert_eq!(undress_state_at(&s, 0, m).unwrap(), expect, "m = {m}");
        }
        assert!(matches!(undress_state_at(&s, 0, 13), Err(Error::SplitOutsideBlock(13))));
    }

    #[test]
    fn dressing_commutes_with_time() {
        let s = st("@3 1/2 -1/3 1 1 0 1/4");
        let omega = profile(&s).omega_max + rat(1, 3);
        let p = SolitonParams::new(omega, rat(5, 2));
        for t in -2..3 {
            let lhs = update(&dress_state(&s, t, &p).unwrap());
            let rhs = dress_state(&update(&s), t + 1, &p).unwrap();
            assert_eq!(lhs, rhs, "t = {t}");
        }
    }

    #[test]
    fn dressing_vacuum_makes_a_soliton() {
        let p = SolitonParams::new(rat(17, 3), rat(5, 2));
        let d = dress_state(&State::zero(), 0, &p).unwrap();
        assert_eq!(d, st("@2 1/2 1 1 1 1 1 1/6"));
        let (back, q) = undress_state(&d, 0, 0).unwrap();
        assert_eq!(back, State::zero());
        assert_eq!(q, p);
    }

    #[test]
    fn dressing_at_equal_mass_round_trips_through_some_block() {
        let s = st("@2 1 1");
        let p = SolitonParams::new(int(2), int(10));
        let d = dress_state(&s, 0, &p).unwrap();
        let prof = profile(&d);
        assert_eq!(prof.blocks.len(), 2);
        let hit = (0..prof.blocks.len()).any(|b| undress_state(&d, 0, b).unwrap() == (s.clone(), p.clone()));
        assert!(hit);
    }

    #[test]
    fn refusals() {
        let s = st("@2 1 1");
        assert!(matches!(
            dress_state(&s, 0, &SolitonParams::new(int(1), int(0))),
            Err(Error::MassTooSmall { .. })
        ));
        assert!(matches!(
            dress_state(&s, 0, &SolitonParams::new(int(0), int(0))),
            Err(Error::DegenerateOmega(_))
        ));
        assert!(matches!(
            dress_state(&s, 0, &SolitonParams::new(int(-1), int(0))),
            Err(Error::DegenerateOmega(_))
        ));
    }

    #[test]
    fn identity_rejects_wrong_transform() {
        let s = st("0 0 0 0 0 1 1/2 0 1");
        let p = SolitonParams::new(int(2), int(7));
        let e0 = eigen::generic_eigenfunction(&s, 0, &p).unwrap();
        let d = dress_state(&s, 0, &p).unwrap();
        assert_eq!(dt_identity_check(&s, &d, &e0), Ok(()));
        assert!(dt_identity_check(&s, &d.shifted(1), &e0).is_err());
    }
}

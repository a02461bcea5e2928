//! Solutions of the (max, +) linear system attached to a udKdV state.
//!
//! For spectral parameter `omega` (with `kappa = min(1, omega)`) and potential
//! `U = U^t`, a pair of sequences `(Phi^t, Phi^{t+1})` solves the system when
//!
//! ```text
//! max(Phi^t_{i+1} - kappa, Phi^t_{i-1})         = Phi^t_i     + max(U_{i-1} - 1, -U_i)
//! max(Phi^{t+1}_{i+1} - kappa, Phi^{t+1}_{i-1}) = Phi^{t+1}_i + max(U_i - 1, -U_{i-1})
//! max(Phi^{t+1}_{i+1}, Phi^t_{i+1} + U_i - 1)   = Phi^t_i
//! max(Phi^t_i + kappa - omega, Phi^{t+1}_i + U_i + kappa - 1) = Phi^{t+1}_{i+1}
//! ```
//!
//! for every `i`.

use std::fmt;

use num_traits::{One, Zero};

use crate::conserved::{profile_from, ConservedProfile};
use crate::error::{Error, Result};
use crate::evolve::{downdate, update};
use crate::rational::{self, Rational};
use crate::state::{joint_span, PartialSums, State};

/// Extra cells sampled on each side of the region where an eigenfunction is
/// not yet affine.
const MARGIN: i64 = 3;

/// Mass, phase and the derived wave number and speed of one soliton.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SolitonParams {
    pub omega: Rational,
    pub phi: Rational,
    pub kappa: Rational,
    pub c: Rational,
}

impl SolitonParams {
    pub fn new(omega: Rational, phi: Rational) -> Self {
        let one = Rational::one();
        SolitonParams {
            kappa: rational::min(one.clone(), omega.clone()),
            c: rational::max(one, omega.clone()),
            omega,
            phi,
        }
    }

    /// Time-dependent phase `phi + c t`.
    pub fn phase_at(&self, t: i64) -> Rational {
        &self.phi + &self.c * Rational::from_integer(t.into())
    }
}

impl fmt::Display for SolitonParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.omega, self.phi)
    }
}

/// The affine function `slope * i + intercept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub slope: Rational,
    pub intercept: Rational,
}

impl Line {
    pub fn new(slope: Rational, intercept: Rational) -> Self {
        Line { slope, intercept }
    }

    pub fn constant(c: Rational) -> Self {
        Line::new(Rational::zero(), c)
    }

    pub fn at(&self, i: i64) -> Rational {
        &self.slope * Rational::from_integer(i.into()) + &self.intercept
    }
}

/// An integer-indexed sequence given by samples on `[lo, lo + len)` and by
/// affine functions to the left and right of that window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TailedSeq {
    pub lo: i64,
    pub values: Vec<Rational>,
    pub left: Line,
    pub right: Line,
}

impl TailedSeq {
    fn sample(lo: i64, hi: i64, left: Line, right: Line, f: impl FnMut(i64) -> Rational) -> Self {
        TailedSeq {
            lo,
            values: (lo..hi).map(f).collect(),
            left,
            right,
        }
    }

    /// Half-open sampling window.
    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.values.len() as i64)
    }

    pub fn at(&self, i: i64) -> Rational {
        let (lo, hi) = self.window();
        if i < lo {
            self.left.at(i)
        } else if i >= hi {
            self.right.at(i)
        } else {
            self.values[(i - lo) as usize].clone()
        }
    }

    /// Whether the samples at the window edges lie on the tails.
    pub fn tails_consistent(&self) -> bool {
        let (lo, hi) = self.window();
        self.values.is_empty()
            || (self.values[0] == self.left.at(lo) && self.values[self.values.len() - 1] == self.right.at(hi - 1))
    }

    fn map(&self, f: impl Fn(i64, &Rational) -> Rational, left: Line, right: Line) -> Self {
        TailedSeq {
            lo: self.lo,
            values: self
                .values
                .iter()
                .enumerate()
                .map(|(k, v)| f(self.lo + k as i64, v))
                .collect(),
            left,
            right,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    /// Max-combination of the basic solutions; adds a soliton.
    Generic,
    /// Min-combination at `omega = omega_max`; removes a soliton.
    Bound,
}

impl Kind {
    fn swapped(self) -> Kind {
        match self {
            Kind::Generic => Kind::Bound,
            Kind::Bound => Kind::Generic,
        }
    }
}

/// One time slice `Phi^t` of a solution of the linear system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenfunction {
    pub params: SolitonParams,
    pub kind: Kind,
    pub t: i64,
    pub split: i64,
    pub seq: TailedSeq,
}

impl Eigenfunction {
    pub fn at(&self, i: i64) -> Rational {
        self.seq.at(i)
    }

    pub fn window(&self) -> (i64, i64) {
        self.seq.window()
    }
}

/// First equation of the linear system (1 to 4) that fails, and where.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub equation: usize,
    pub index: i64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "equation {} fails at i = {}", self.equation, self.index)
    }
}

fn require_positive(p: &SolitonParams) -> Result<()> {
    if p.omega > Rational::zero() {
        Ok(())
    } else {
        Err(Error::DegenerateOmega(p.omega.clone()))
    }
}

fn require_mass(p: &SolitonParams, prof: &ConservedProfile) -> Result<()> {
    require_positive(p)?;
    if p.omega < prof.omega_max {
        return Err(Error::MassTooSmall {
            omega: p.omega.clone(),
            omega_max: prof.omega_max.clone(),
        });
    }
    Ok(())
}

/// The three time slices around `s` together with its conserved profile.
pub(crate) struct Slices {
    pub prev: State,
    pub cur: State,
    pub next: State,
    pub profile: ConservedProfile,
}

impl Slices {
    pub fn of(s: &State) -> Self {
        let prev = downdate(s);
        let next = update(s);
        let profile = profile_from(&prev, s, &next);
        Slices {
            prev,
            cur: s.clone(),
            next,
            profile,
        }
    }
}

/// The two basic solutions `sum_{j<i} U^{t-1}_j` and
/// `kappa i - omega t + sum_{j>=i} U^t_j`, sampled over the joint support of
/// `U^{t-1}` and `U^t` widened by three cells.
pub fn basic_solutions(s: &State, t: i64, p: &SolitonParams) -> Result<(TailedSeq, TailedSeq)> {
    let sl = Slices::of(s);
    require_mass(p, &sl.profile)?;
    let (lo, hi) = joint_span([&sl.prev, &sl.cur]).unwrap_or((0, 0));
    let (lo, hi) = (lo - MARGIN, hi + MARGIN);
    let mass = s.total_mass();
    let omega_t = &p.omega * Rational::from_integer(t.into());
    let (prev_sums, cur_sums) = (sl.prev.partial_sums(), sl.cur.partial_sums());
    let first = TailedSeq::sample(
        lo,
        hi,
        Line::constant(Rational::zero()),
        Line::constant(mass.clone()),
        |i| prev_sums.below(i),
    );
    let second = TailedSeq::sample(
        lo,
        hi,
        Line::new(p.kappa.clone(), &mass - &omega_t),
        Line::new(p.kappa.clone(), -&omega_t),
        |i| &p.kappa * Rational::from_integer(i.into()) - &omega_t + cur_sums.from(i),
    );
    Ok((first, second))
}

/// `F_i = kappa (i - phi^t) + sum_{j>=i} U^t_j - sum_{j<i} U^{t-1}_j`.
fn f_seq(prev: &PartialSums, cur: &PartialSums, phase: &Rational, kappa: &Rational, i: i64) -> Rational {
    kappa * (Rational::from_integer(i.into()) - phase) + cur.from(i) - prev.below(i)
}

/// Window `[lo, hi)` outside which the generic eigenfunction is affine.
fn generic_window(prev: &State, cur: &State, phase: &Rational, kappa: &Rational) -> (i64, i64) {
    let mass = cur.total_mass();
    let reach = &mass / kappa;
    let (a, b) = joint_span([prev, cur]).unwrap_or((0, 0));
    let lo = a.min(rational::floor_i64(&(phase - &reach)));
    let hi = b.max(rational::ceil_i64(&(phase + &reach)));
    (lo - MARGIN, hi + MARGIN)
}

fn split_from(prev: &State, cur: &State, phase: &Rational, p: &SolitonParams, window: (i64, i64)) -> Result<i64> {
    let (lo, hi) = window;
    let (prev, cur) = (prev.partial_sums(), cur.partial_sums());
    let mut last: Option<Rational> = None;
    let mut split = None;
    for i in lo..hi {
        let f = f_seq(&prev, &cur, phase, &p.kappa, i);
        if let Some(prev_f) = &last {
            if f < *prev_f {
                return Err(Error::breach(format!("F decreases at i = {i}")));
            }
        }
        if split.is_none() && f >= Rational::zero() {
            split = Some(i);
        }
        last = Some(f);
    }
    split.ok_or_else(|| Error::breach("F never becomes nonnegative inside the window"))
}

/// `F_i = kappa (i - phi^t) + sum_{j>=i} U^t_j - sum_{j<i} U^{t-1}_j`, the
/// difference of the two basic branches; weakly increasing whenever
/// `omega >= omega_max`.
pub fn split_function(s: &State, t: i64, p: &SolitonParams) -> Result<TailedSeq> {
    let sl = Slices::of(s);
    require_mass(p, &sl.profile)?;
    let phase = p.phase_at(t);
    let (lo, hi) = generic_window(&sl.prev, s, &phase, &p.kappa);
    let (prev, cur) = (sl.prev.partial_sums(), s.partial_sums());
    let mass = s.total_mass();
    let start = -(&p.kappa * &phase);
    Ok(TailedSeq::sample(
        lo,
        hi,
        Line::new(p.kappa.clone(), &start + &mass),
        Line::new(p.kappa.clone(), &start - &mass),
        |i| f_seq(&prev, &cur, &phase, &p.kappa, i),
    ))
}

/// Left-most index `m` where `F_m` takes its smallest nonnegative value, i.e.
/// where the generic eigenfunction switches from its first to its second
/// basic branch.
pub fn split_point(s: &State, t: i64, p: &SolitonParams) -> Result<i64> {
    let sl = Slices::of(s);
    require_mass(p, &sl.profile)?;
    let phase = p.phase_at(t);
    let w = generic_window(&sl.prev, s, &phase, &p.kappa);
    split_from(&sl.prev, s, &phase, p, w)
}

/// Generic slice built from `U^{t-1} = prev` and `U^t = cur`, with no mass
/// precondition check.
pub(crate) fn generic_from(prev: &State, cur: &State, t: i64, p: &SolitonParams) -> Result<Eigenfunction> {
    let phase = p.phase_at(t);
    let window = generic_window(prev, cur, &phase, &p.kappa);
    let split = split_from(prev, cur, &phase, p, window)?;
    let (prev_sums, cur_sums) = (prev.partial_sums(), cur.partial_sums());
    let seq = TailedSeq::sample(
        window.0,
        window.1,
        Line::constant(Rational::zero()),
        Line::new(p.kappa.clone(), -(&p.kappa * &phase)),
        |i| {
            let first = prev_sums.below(i);
            let second = &p.kappa * (Rational::from_integer(i.into()) - &phase) + cur_sums.from(i);
            rational::max(first, second)
        },
    );
    debug_assert!(seq.tails_consistent());
    Ok(Eigenfunction {
        params: p.clone(),
        kind: Kind::Generic,
        t,
        split,
        seq,
    })
}

/// `Theta_i = max(sum_{j<i} U^{t-1}_j, kappa (i - phi - c t) + sum_{j>=i} U^t_j)`,
/// normalised to 0 on the far left.
pub fn generic_eigenfunction(s: &State, t: i64, p: &SolitonParams) -> Result<Eigenfunction> {
    let sl = Slices::of(s);
    require_mass(p, &sl.profile)?;
    generic_from(&sl.prev, s, t, p)
}

/// Generic slices at `t` and `t + 1` for `s = U^t`.
pub fn generic_pair(s: &State, t: i64, p: &SolitonParams) -> Result<(Eigenfunction, Eigenfunction)> {
    let sl = Slices::of(s);
    require_mass(p, &sl.profile)?;
    Ok((generic_from(&sl.prev, s, t, p)?, generic_from(s, &sl.next, t + 1, p)?))
}

/// Bound-state slices at `t` and `t + 1` for the maximal block `block_index`
/// of `s = U^t`, plus the `(omega_max, phi_max)` they carry.
pub fn bound_pair(s: &State, t: i64, block_index: usize) -> Result<(Eigenfunction, Eigenfunction, SolitonParams)> {
    bound_pair_from(&Slices::of(s), t, block_index)
}

/// Bound-state slices split at an arbitrary index `m` of a maximal block.
/// Every index of one block yields the same eigenfunctions.
pub fn bound_pair_at(s: &State, t: i64, m: i64) -> Result<(Eigenfunction, Eigenfunction, SolitonParams)> {
    bound_pair_split(&Slices::of(s), t, m)
}

pub(crate) fn bound_pair_from(
    sl: &Slices,
    t: i64,
    block_index: usize,
) -> Result<(Eigenfunction, Eigenfunction, SolitonParams)> {
    if sl.profile.omega_max.is_zero() {
        return Err(Error::NoSoliton);
    }
    let m = sl.profile.block(block_index)?.left;
    bound_pair_split(sl, t, m)
}

pub(crate) fn bound_pair_split(sl: &Slices, t: i64, m: i64) -> Result<(Eigenfunction, Eigenfunction, SolitonParams)> {
    let prof = &sl.profile;
    if prof.omega_max.is_zero() {
        return Err(Error::NoSoliton);
    }
    if !prof.blocks.iter().any(|b| b.contains(m)) {
        return Err(Error::SplitOutsideBlock(m));
    }
    let kappa = prof.kappa_max.clone();
    let c = prof.c_max.clone();
    let tq = |t: i64| Rational::from_integer(t.into());
    let phi_at = |older: &State, newer: &State, t: i64| {
        tq(m) - &c * tq(t) + (older.sum_from(m) - newer.sum_below(m)) / &kappa
    };
    let phi = phi_at(&sl.prev, &sl.cur, t);
    if phi_at(&sl.cur, &sl.next, t + 1) != phi {
        return Err(Error::breach("phi_max depends on t"));
    }
    let params = SolitonParams::new(prof.omega_max.clone(), phi);
    let slice = |older: &State, newer: &State, t: i64| {
        // kappa (i - m) + sum_{j=i}^{m-1} U^t_j + sum_{j<m} U^{t-1}_j for i <= m
        let (older_sums, newer_sums) = (older.partial_sums(), newer.partial_sums());
        let below_m = newer_sums.below(m) + older_sums.below(m);
        let (a, b) = joint_span([older, newer]).unwrap_or((m, m));
        let (lo, hi) = (a.min(m) - MARGIN, b.max(m + 1) + MARGIN);
        let left = Line::new(kappa.clone(), &below_m - &kappa * tq(m));
        let right = Line::constant(newer.total_mass());
        let seq = TailedSeq::sample(lo, hi, left, right, |i| {
            if i <= m {
                &kappa * tq(i - m) + &below_m - newer_sums.below(i)
            } else {
                older_sums.below(i)
            }
        });
        debug_assert!(seq.tails_consistent());
        Eigenfunction {
            params: params.clone(),
            kind: Kind::Bound,
            t,
            split: m,
            seq,
        }
    };
    let e0 = slice(&sl.prev, &sl.cur, t);
    let e1 = slice(&sl.cur, &sl.next, t + 1);
    if let Err(v) = verify_linear_system(&sl.cur, &e0, &e1, &params) {
        return Err(Error::breach(format!("bound state: {v}")));
    }
    Ok((e0, e1, params))
}

/// Bound-state eigenfunction at `omega = omega_max`, split at the left-most
/// index of the chosen maximal block, and its `(omega_max, phi_max)`.
pub fn bound_state(s: &State, t: i64, block_index: usize) -> Result<(Eigenfunction, SolitonParams)> {
    let (e, _, p) = bound_pair(s, t, block_index)?;
    Ok((e, p))
}

/// Checks all four equations of the linear system for `U^t = s` with the
/// slices `phi_t`, `phi_t1` over the union of their windows plus two cells.
pub fn verify_linear_system(
    s: &State,
    phi_t: &Eigenfunction,
    phi_t1: &Eigenfunction,
    p: &SolitonParams,
) -> Result<(), Violation> {
    let (a0, b0) = phi_t.window();
    let (a1, b1) = phi_t1.window();
    let (sa, sb) = s.span();
    let lo = a0.min(a1).min(sa) - 2;
    let hi = b0.max(b1).max(sb) + 2;
    let one = Rational::one();
    let k = &p.kappa;
    let w = &p.omega;
    let u = |i: i64| s.get(i);
    let x = |i: i64| phi_t.at(i);
    let y = |i: i64| phi_t1.at(i);
    for i in lo..hi {
        let lin1 = rational::max(x(i + 1) - k, x(i - 1)) == x(i) + rational::max(u(i - 1) - &one, -u(i));
        if !lin1 {
            return Err(Violation { equation: 1, index: i });
        }
        let lin2 = rational::max(y(i + 1) - k, y(i - 1)) == y(i) + rational::max(u(i) - &one, -u(i - 1));
        if !lin2 {
            return Err(Violation { equation: 2, index: i });
        }
        let lin3 = rational::max(y(i + 1), x(i + 1) + u(i) - &one) == x(i);
        if !lin3 {
            return Err(Violation { equation: 3, index: i });
        }
        let lin4 = rational::max(x(i) + k - w, y(i) + u(i) + k - &one) == y(i + 1);
        if !lin4 {
            return Err(Violation { equation: 4, index: i });
        }
    }
    Ok(())
}

/// `kappa i - omega t - Phi_i`, which solves the linear system of the
/// Darboux-transformed state. Generic and bound kinds swap; applying the map
/// twice gives back the input.
pub fn adjoint(e: &Eigenfunction) -> Eigenfunction {
    let p = &e.params;
    let wt = &p.omega * Rational::from_integer(e.t.into());
    let flip = |l: &Line| Line::new(&p.kappa - &l.slope, -&wt - &l.intercept);
    let seq = e.seq.map(
        |i, v| &p.kappa * Rational::from_integer(i.into()) - &wt - v,
        flip(&e.seq.left),
        flip(&e.seq.right),
    );
    Eigenfunction {
        params: p.clone(),
        kind: e.kind.swapped(),
        t: e.t,
        split: e.split,
        seq,
    }
}

/// `SE_i = Theta_i + Theta_{i-1} + kappa (c t + 1 - i)` for a bound state;
/// decreases linearly (slopes `kappa` and `-kappa`) on both sides.
pub fn squared_eigenfunction(e: &Eigenfunction) -> Result<TailedSeq> {
    if e.kind != Kind::Bound {
        return Err(Error::KindMismatch { expected: "bound" });
    }
    let p = &e.params;
    let ct1 = &p.c * Rational::from_integer(e.t.into()) + Rational::one();
    let (lo, hi) = e.window();
    // l(i) + l(i-1) + kappa (ct + 1 - i)
    let tail = |l: &Line| {
        Line::new(
            &l.slope * Rational::from_integer(2.into()) - &p.kappa,
            &l.intercept * Rational::from_integer(2.into()) - &l.slope + &p.kappa * &ct1,
        )
    };
    Ok(TailedSeq::sample(
        lo,
        hi + 1,
        tail(&e.seq.left),
        tail(&e.seq.right),
        |i| e.at(i) + e.at(i - 1) + &p.kappa * (&ct1 - Rational::from_integer(i.into())),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn st(s: &str) -> State {
        s.parse().unwrap()
    }

    fn row(e: &Eigenfunction, lo: i64, hi: i64) -> Vec<Rational> {
        (lo..=hi).map(|i| e.at(i)).collect()
    }

    fn vals(s: &str) -> Vec<Rational> {
        s.split_whitespace()
            .map(|t| crate::rational::parse_rational(t).unwrap())
            .collect()
    }

    const GENERIC: &str = "0 0 0 0 0 1 1/2 0 1";
    const DRESSED: &str = "0 0 0 1/2 1 0 1/2 1 0 1 1/2";

    #[test]
    fn basic_solutions_of_worked_example() {
        let s = st(GENERIC);
        let p = SolitonParams::new(int(2), int(7));
        let (first, second) = basic_solutions(&s, 0, &p).unwrap();
        // second basic solution shifted by -kappa phi = -7
        let shifted: Vec<_> = (1..=15).map(|i| second.at(i) - int(7)).collect();
        assert_eq!(shifted, vals("-7/2 -5/2 -3/2 -1/2 1/2 3/2 3/2 2 3 3 4 5 6 7 8"));
        let sums: Vec<_> = (1..=15).map(|i| first.at(i)).collect();
        assert_eq!(sums, vals("0 0 0 0 1/2 3/2 3/2 3/2 5/2 5/2 5/2 5/2 5/2 5/2 5/2"));
    }

    #[test]
    fn generic_eigenfunction_rows() {
        let s = st(GENERIC);
        let p = SolitonParams::new(int(2), int(7));
        let (e0, e1) = generic_pair(&s, 0, &p).unwrap();
        assert_eq!(row(&e0, 1, 15), vals("0 0 0 0 1/2 3/2 3/2 2 3 3 4 5 6 7 8"));
        assert_eq!(row(&e1, 1, 15), vals("0 0 0 0 0 0 1 3/2 3/2 5/2 5/2 3 4 5 6"));
        assert_eq!(e0.split, 5);
        assert_eq!(e1.split, 12);
        assert_eq!(split_point(&update(&s), 1, &p).unwrap(), 12);
        assert_eq!(verify_linear_system(&s, &e0, &e1, &p), Ok(()));
    }

    #[test]
    fn perturbed_sample_breaks_the_system() {
        let s = st(GENERIC);
        let p = SolitonParams::new(int(2), int(7));
        let (mut e0, e1) = generic_pair(&s, 0, &p).unwrap();
        let k = (7 - e0.seq.lo) as usize;
        e0.seq.values[k] += int(1);
        assert!(verify_linear_system(&s, &e0, &e1, &p).is_err());
    }

    #[test]
    fn vacuum_eigenfunction() {
        let z = State::zero();
        let p = SolitonParams::new(int(1), int(0));
        assert_eq!(split_point(&z, 0, &p).unwrap(), 0);
        let p = SolitonParams::new(rat(1, 2), rat(3, 2));
        let (e0, e1) = generic_pair(&z, 2, &p).unwrap();
        for i in -10..10 {
            let expect = rational::max(int(0), &p.kappa * (int(i) - p.phase_at(2)));
            assert_eq!(e0.at(i), expect);
        }
        assert_eq!(verify_linear_system(&z, &e0, &e1, &p), Ok(()));
        let a = adjoint(&e0);
        assert_eq!(a.kind, Kind::Bound);
        for i in -10..10 {
            let expect = rational::min(&p.kappa * (int(i) - p.phase_at(2)), int(0)) + &p.kappa * &p.phi;
            assert_eq!(a.at(i), expect);
        }
    }

    #[test]
    fn refuses_small_or_zero_omega() {
        let s = st(GENERIC);
        let small = SolitonParams::new(int(1), int(0));
        assert!(matches!(
            generic_eigenfunction(&s, 0, &small),
            Err(Error::MassTooSmall { .. })
        ));
        let zero = SolitonParams::new(int(0), int(0));
        assert!(matches!(
            generic_eigenfunction(&State::zero(), 0, &zero),
            Err(Error::DegenerateOmega(_))
        ));
        let exact = SolitonParams::new(rat(3, 2), int(4));
        let (e0, e1) = generic_pair(&s, 0, &exact).unwrap();
        assert_eq!(verify_linear_system(&s, &e0, &e1, &exact), Ok(()));
    }

    #[test]
    fn bound_state_of_dressed_example() {
        let s = st(DRESSED);
        let (e0, e1, p) = bound_pair(&s, 0, 0).unwrap();
        assert_eq!(p, SolitonParams::new(int(2), int(7)));
        assert_eq!(e0.split, 5);
        assert_eq!(
            row(&e0, 1, 15),
            vals("-3/2 -1/2 1/2 3/2 2 2 3 7/2 7/2 9/2 9/2 9/2 9/2 9/2 9/2")
        );
        assert_eq!(verify_linear_system(&s, &e0, &e1, &p), Ok(()));
        // sum U + (i - 7) - bar Theta is the dressing eigenfunction
        let dressing = generic_eigenfunction(&st(GENERIC), 0, &p).unwrap();
        let a = adjoint(&e0);
        let gauge = s.total_mass() - &p.kappa * &p.phi;
        for i in -5..25 {
            assert_eq!(&a.at(i) + &gauge, dressing.at(i), "i = {i}");
        }
    }

    #[test]
    fn bound_state_of_single_soliton_with_background() {
        let (_, p) = bound_state(&st(GENERIC), 0, 0).unwrap();
        assert_eq!(p, SolitonParams::new(rat(3, 2), int(7)));
        assert!(matches!(bound_state(&State::zero(), 0, 0), Err(Error::NoSoliton)));
        assert!(matches!(
            bound_state(&st(GENERIC), 0, 1),
            Err(Error::BlockOutOfRange { index: 1, count: 1 })
        ));
    }

    #[test]
    fn blocks_order_bound_states() {
        let s = st("0 0 0 0 1 1 0 1 1 0 0 0 0 1 1 1 0 0 0 0");
        let (l, _) = bound_state(&s, 0, 0).unwrap();
        let (r, _) = bound_state(&s, 0, 1).unwrap();
        let mut differ = false;
        for i in -5..30 {
            assert!(l.at(i) >= r.at(i));
            differ |= l.at(i) != r.at(i);
        }
        assert!(differ);
    }

    #[test]
    fn every_index_of_a_block_gives_the_same_bound_state() {
        let s = st("0 0 0 0 1 1 0 1 1 0 0 0 0 1 1 1 0 0 0 0");
        let (first, _, p) = bound_pair(&s, 0, 0).unwrap();
        for m in 5..=10 {
            let (e, _, q) = bound_pair_at(&s, 0, m).unwrap();
            assert_eq!((e.seq.clone(), q), (first.seq.clone(), p.clone()), "m = {m}");
        }
        assert!(matches!(bound_pair_at(&s, 0, 12), Err(Error::SplitOutsideBlock(12))));
    }

    #[test]
    fn adjoint_is_an_involution() {
        let s = st(DRESSED);
        let (e, _) = bound_state(&s, 3, 0).unwrap();
        assert_eq!(adjoint(&adjoint(&e)), e);
    }

    #[test]
    fn squared_eigenfunction_shape() {
        let s = st(DRESSED);
        let (e, p) = bound_state(&s, 0, 0).unwrap();
        let se = squared_eigenfunction(&e).unwrap();
        assert_eq!(se.left.slope, p.kappa);
        assert_eq!(se.right.slope, -p.kappa.clone());
        assert!(se.tails_consistent());
        for i in -20..40 {
            assert_eq!(se.at(i), e.at(i) + e.at(i - 1) + &p.kappa * (int(1) - int(i)));
        }
        let generic = generic_eigenfunction(&st(GENERIC), 0, &p).unwrap();
        assert!(matches!(
            squared_eigenfunction(&generic),
            Err(Error::KindMismatch { .. })
        ));
    }

    #[test]
    fn squared_eigenfunction_of_one_soliton_is_a_tent() {
        // omega = 2, phi = 3: cells 3 and 4 hold 1
        let s = st("@3 1 1");
        let (e, p) = bound_state(&s, 0, 0).unwrap();
        assert_eq!(p, SolitonParams::new(int(2), int(3)));
        let se = squared_eigenfunction(&e).unwrap();
        let peak = (-10..20).map(|i| se.at(i)).max().unwrap();
        let top: Vec<i64> = (-10..20).filter(|&i| se.at(i) == peak).collect();
        let centre = top[0] + top[top.len() - 1];
        for d in 0..10 {
            assert_eq!(se.at(top[0] - d), se.at(top[top.len() - 1] + d), "centre {centre}");
        }
    }
}

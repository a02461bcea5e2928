//! Symbolic tropical T-functions.
//!
//! A T-function is a piecewise-linear function `T(i, t)` from which a udKdV
//! solution is read off as the mixed second difference
//! `U^t_i = T^t_{i+1} + T^{t+1}_i - T^t_i - T^{t+1}_{i+1}`. Solutions satisfy the
//! bilinear form `T^{t+1}_{i+1} + T^{t-1}_i = max(T^t_{i+1} + T^t_i, T^{t+1}_i + T^{t-1}_{i+1} - 1)`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::eigen::SolitonParams;
use crate::error::{Error, Result};
use crate::evolve::local_sum_max;
use crate::rational::{self, parse_rational, Rational};
use crate::state::State;

/// Expression tree in the variables `i` and `t`.
///
/// Text form is parenthesised prefix notation:
/// `(aff a b d)` is `a i + b t + d`, and `(abs x)`, `(max x ...)`,
/// `(min x ...)`, `(sum x ...)`, `(scale c x)` combine subexpressions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TExpr {
    Affine { a: Rational, b: Rational, d: Rational },
    Abs(Box<TExpr>),
    Max(Vec<TExpr>),
    Min(Vec<TExpr>),
    Sum(Vec<TExpr>),
    Scale(Rational, Box<TExpr>),
}

/// Anything that can be evaluated as a T-function.
pub trait TFunction {
    fn eval(&self, i: &Rational, t: &Rational) -> Rational;
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl TExpr {
    pub fn affine(a: Rational, b: Rational, d: Rational) -> Self {
        TExpr::Affine { a, b, d }
    }

    pub fn constant(d: Rational) -> Self {
        TExpr::affine(Rational::zero(), Rational::zero(), d)
    }

    pub fn zero() -> Self {
        TExpr::constant(Rational::zero())
    }

    pub fn abs(x: TExpr) -> Self {
        TExpr::Abs(Box::new(x))
    }

    pub fn scale(c: Rational, x: TExpr) -> Self {
        TExpr::Scale(c, Box::new(x))
    }

    /// The substitution `t -> t + k`.
    pub fn shift_t(&self, k: i64) -> TExpr {
        self.shift_t_by(&q(k))
    }

    fn shift_t_by(&self, k: &Rational) -> TExpr {
        match self {
            TExpr::Affine { a, b, d } => TExpr::affine(a.clone(), b.clone(), d + b * k),
            TExpr::Abs(x) => TExpr::abs(x.shift_t_by(k)),
            TExpr::Max(xs) => TExpr::Max(xs.iter().map(|x| x.shift_t_by(k)).collect()),
            TExpr::Min(xs) => TExpr::Min(xs.iter().map(|x| x.shift_t_by(k)).collect()),
            TExpr::Sum(xs) => TExpr::Sum(xs.iter().map(|x| x.shift_t_by(k)).collect()),
            TExpr::Scale(c, x) => TExpr::scale(c.clone(), x.shift_t_by(k)),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            TExpr::Affine { .. } => 1,
            TExpr::Abs(x) | TExpr::Scale(_, x) => 1 + x.node_count(),
            TExpr::Max(xs) | TExpr::Min(xs) | TExpr::Sum(xs) => 1 + xs.iter().map(TExpr::node_count).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            TExpr::Affine { .. } => 1,
            TExpr::Abs(x) | TExpr::Scale(_, x) => 1 + x.depth(),
            TExpr::Max(xs) | TExpr::Min(xs) | TExpr::Sum(xs) => 1 + xs.iter().map(TExpr::depth).max().unwrap_or(0),
        }
    }
}

impl TFunction for TExpr {
    fn eval(&self, i: &Rational, t: &Rational) -> Rational {
        match self {
            TExpr::Affine { a, b, d } => a * i + b * t + d,
            TExpr::Abs(x) => rational::abs(&x.eval(i, t)),
            TExpr::Max(xs) => xs.iter().map(|x| x.eval(i, t)).reduce(rational::max).expect("empty max"),
            TExpr::Min(xs) => xs.iter().map(|x| x.eval(i, t)).reduce(rational::min).expect("empty min"),
            TExpr::Sum(xs) => xs.iter().map(|x| x.eval(i, t)).sum(),
            TExpr::Scale(c, x) => c * x.eval(i, t),
        }
    }
}

pub fn eval(f: &impl TFunction, i: &Rational, t: &Rational) -> Rational {
    f.eval(i, t)
}

/// `T^t_{x+1} + T^{t+1}_x - T^t_x - T^{t+1}_{x+1}` at a rational position `x`.
pub fn u_at(f: &impl TFunction, x: &Rational, t: i64) -> Rational {
    let x1 = x + Rational::one();
    let (t0, t1) = (q(t), q(t + 1));
    f.eval(&x1, &t0) + f.eval(x, &t1) - f.eval(x, &t0) - f.eval(&x1, &t1)
}

/// `U^t_i` read off from a T-function.
pub fn u_from_t(f: &impl TFunction, i: i64, t: i64) -> Rational {
    u_at(f, &q(i), t)
}

/// `T = 1/2 sum_j |i - t - j| B_j`, the T-function of a state that moves
/// rigidly at speed 1.
pub fn background_t(b: &State) -> Result<TExpr> {
    let v = local_sum_max(b);
    if v > Rational::one() {
        return Err(Error::NotBackground(v));
    }
    if b.is_trivial() {
        return Ok(TExpr::zero());
    }
    let half = Rational::new(1.into(), 2.into());
    Ok(TExpr::Sum(
        b.iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| {
                let at = TExpr::affine(Rational::one(), -Rational::one(), q(-j));
                TExpr::scale(&half * v, TExpr::abs(at))
            })
            .collect(),
    ))
}

/// `1/2 kappa (i - phi - c t)` as an affine node.
fn half_phase(p: &SolitonParams) -> TExpr {
    let half = Rational::new(1.into(), 2.into());
    TExpr::affine(&half * &p.kappa, -(&half * &p.omega), -(&half * &p.kappa * &p.phi))
}

fn negated(e: TExpr) -> TExpr {
    match e {
        TExpr::Affine { a, b, d } => TExpr::affine(-a, -b, -d),
        other => TExpr::scale(-Rational::one(), other),
    }
}

/// Adds soliton `p`:
/// `~T = max(1/2 kappa (i - phi^t) + T|_{t+1}, -1/2 kappa (i - phi^t) + T|_{t-1})`.
pub fn dress_t(f: &TExpr, p: &SolitonParams) -> TExpr {
    let a = half_phase(p);
    TExpr::Max(vec![
        TExpr::Sum(vec![a.clone(), f.shift_t(1)]),
        TExpr::Sum(vec![negated(a), f.shift_t(-1)]),
    ])
}

/// A base T-function dressed by a sequence of solitons, in insertion order.
///
/// Equivalent to folding [`dress_t`] over `solitons`, but evaluated by
/// dynamic programming over time offsets: the expanded tree doubles in size
/// with every soliton, this costs `O(n^2)` base evaluations per point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DressingChain {
    pub base: TExpr,
    pub solitons: Vec<SolitonParams>,
}

impl DressingChain {
    pub fn new(base: TExpr, solitons: Vec<SolitonParams>) -> Self {
        DressingChain { base, solitons }
    }

    /// The expanded tree, exponential in the number of solitons.
    pub fn to_texpr(&self) -> TExpr {
        self.solitons.iter().fold(self.base.clone(), |acc, p| dress_t(&acc, p))
    }
}

impl DressingChain {
    /// `T(i, t)` for every `t` in `t_lo..=t_hi`, sharing the base evaluations.
    pub fn column(&self, i: &Rational, t_lo: &Rational, len: usize) -> Vec<Rational> {
        let n = self.solitons.len() as i64;
        let len = len as i64;
        // level[k] holds the value at time t_lo - reach + k
        let mut level: Vec<Rational> = (-n..n + len).map(|k| self.base.eval(i, &(t_lo + q(k)))).collect();
        for (lvl, p) in self.solitons.iter().enumerate() {
            let reach = n - lvl as i64 - 1;
            let a = half_phase(p);
            level = (0..(len + 2 * reach) as usize)
                .map(|k| {
                    let phase = a.eval(i, &(t_lo + q(k as i64 - reach)));
                    rational::max(&phase + &level[k + 2], &level[k] - &phase)
                })
                .collect();
        }
        level
    }

    /// `U^t_x` at a rational position.
    pub fn u_at(&self, x: &Rational, t: i64) -> Rational {
        let t0 = q(t);
        let a = self.column(x, &t0, 2);
        let b = self.column(&(x + Rational::one()), &t0, 2);
        &b[0] + &a[1] - &a[0] - &b[1]
    }

    /// `U^t_i` for `i` in `lo..hi`, with one column evaluation per index.
    pub fn state_window(&self, lo: i64, hi: i64, t: i64) -> State {
        let t0 = q(t);
        let cols: Vec<Vec<Rational>> = (lo..=hi.max(lo)).map(|i| self.column(&q(i), &t0, 2)).collect();
        State::from_fn(lo, hi, |i| {
            let (a, b) = (&cols[(i - lo) as usize], &cols[(i - lo + 1) as usize]);
            &b[0] + &a[1] - &a[0] - &b[1]
        })
    }
}

impl TFunction for DressingChain {
    fn eval(&self, i: &Rational, t: &Rational) -> Rational {
        self.column(i, t, 1).pop().expect("chain evaluation")
    }
}

/// First grid point `(i, t)` where the bilinear form fails.
pub fn bilinear_violation(
    f: &impl TFunction,
    i_range: std::ops::RangeInclusive<i64>,
    t_range: std::ops::RangeInclusive<i64>,
) -> Option<(i64, i64)> {
    let one = Rational::one();
    for t in t_range {
        for i in i_range.clone() {
            let v = |di: i64, dt: i64| f.eval(&q(i + di), &q(t + dt));
            let lhs = v(1, 1) + v(0, -1);
            let rhs = rational::max(v(1, 0) + v(0, 0), v(0, 1) + v(1, -1) - &one);
            if lhs != rhs {
                return Some((i, t));
            }
        }
    }
    None
}

pub fn verify_bilinear(
    f: &impl TFunction,
    i_range: std::ops::RangeInclusive<i64>,
    t_range: std::ops::RangeInclusive<i64>,
) -> bool {
    bilinear_violation(f, i_range, t_range).is_none()
}

/// `(Z_-, Z_+)` with `Z_i = T^t_i - T^{t+1}_i`, read at the window edges.
/// `None` when the edge values differ between `t` and `t + 1`, i.e. the
/// window does not reach the asymptotic region.
pub fn asymptotic_z(f: &impl TFunction, t: i64, window: (i64, i64)) -> Option<(Rational, Rational)> {
    let z = |i: i64, t: i64| f.eval(&q(i), &q(t)) - f.eval(&q(i), &q(t + 1));
    let (lo, hi) = window;
    let pair = (z(lo, t), z(hi, t));
    (pair == (z(lo, t + 1), z(hi, t + 1))).then_some(pair)
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Lin {
    slope: Rational,
    icept: Rational,
}

impl Lin {
    fn root(&self) -> Option<Rational> {
        (!self.slope.is_zero()).then(|| -&self.icept / &self.slope)
    }

    fn scaled(&self, c: &Rational) -> Lin {
        Lin {
            slope: &self.slope * c,
            icept: &self.icept * c,
        }
    }

    fn add(&self, o: &Lin) -> Lin {
        Lin {
            slope: &self.slope + &o.slope,
            icept: &self.icept + &o.icept,
        }
    }
}

/// Behaviour of `i -> T(i, t)`: affine as `left` for `i <= lo` and as
/// `right` for `i >= hi`, or affine everywhere when `kinks` is `None`.
struct Tails {
    kinks: Option<(Rational, Rational)>,
    left: Lin,
    right: Lin,
}

impl Tails {
    fn widen(&mut self, x: Rational) {
        self.kinks = Some(match self.kinks.take() {
            None => (x.clone(), x),
            Some((lo, hi)) => (rational::min(lo, x.clone()), rational::max(hi, x)),
        });
    }

    fn left_of(&self, x: &Rational) -> bool {
        self.kinks.as_ref().map_or(true, |(lo, _)| x < lo)
    }

    fn right_of(&self, x: &Rational) -> bool {
        self.kinks.as_ref().map_or(true, |(_, hi)| x > hi)
    }
}

fn union(parts: &[Tails]) -> Option<(Rational, Rational)> {
    parts.iter().filter_map(|p| p.kinks.clone()).reduce(|(a, b), (c, d)| (rational::min(a, c), rational::max(b, d)))
}

/// Dominant line as `i -> -inf` (`left`) or `+inf`; `pick_max` selects max or min.
fn dominant(lines: &[Lin], left: bool, pick_max: bool) -> Lin {
    let key = |l: &Lin| {
        let s = if left { -l.slope.clone() } else { l.slope.clone() };
        let v = (s, l.icept.clone());
        if pick_max {
            v
        } else {
            (-v.0, -v.1)
        }
    };
    lines.iter().max_by(|x, y| key(x).cmp(&key(y))).cloned().expect("no lines")
}

fn tails(e: &TExpr, t: &Rational) -> Tails {
    match e {
        TExpr::Affine { a, b, d } => {
            let l = Lin {
                slope: a.clone(),
                icept: b * t + d,
            };
            Tails {
                kinks: None,
                left: l.clone(),
                right: l,
            }
        }
        TExpr::Scale(c, x) => {
            let inner = tails(x, t);
            Tails {
                kinks: inner.kinks,
                left: inner.left.scaled(c),
                right: inner.right.scaled(c),
            }
        }
        TExpr::Abs(x) => {
            let mut r = tails(x, t);
            for (line, is_left) in [(r.left.clone(), true), (r.right.clone(), false)] {
                if let Some(z) = line.root() {
                    if (is_left && r.left_of(&z)) || (!is_left && r.right_of(&z)) {
                        r.widen(z);
                    }
                }
            }
            let sign_at = |l: &Lin, left: bool| {
                let s = if l.slope.is_zero() {
                    l.icept.signum()
                } else if left {
                    -l.slope.signum()
                } else {
                    l.slope.signum()
                };
                if s.is_negative() {
                    -Rational::one()
                } else {
                    Rational::one()
                }
            };
            r.left = r.left.scaled(&sign_at(&r.left, true));
            r.right = r.right.scaled(&sign_at(&r.right, false));
            r
        }
        TExpr::Sum(xs) => {
            let parts: Vec<Tails> = xs.iter().map(|x| tails(x, t)).collect();
            let zero = Lin {
                slope: Rational::zero(),
                icept: Rational::zero(),
            };
            Tails {
                kinks: union(&parts),
                left: parts.iter().fold(zero.clone(), |acc, p| acc.add(&p.left)),
                right: parts.iter().fold(zero, |acc, p| acc.add(&p.right)),
            }
        }
        TExpr::Max(xs) | TExpr::Min(xs) => {
            let pick_max = matches!(e, TExpr::Max(_));
            let parts: Vec<Tails> = xs.iter().map(|x| tails(x, t)).collect();
            let mut out = Tails {
                kinks: union(&parts),
                left: dominant(&parts.iter().map(|p| p.left.clone()).collect::<Vec<_>>(), true, pick_max),
                right: dominant(&parts.iter().map(|p| p.right.clone()).collect::<Vec<_>>(), false, pick_max),
            };
            for (a, pa) in parts.iter().enumerate() {
                for pb in &parts[a + 1..] {
                    for (la, lb, is_left) in [(&pa.left, &pb.left, true), (&pa.right, &pb.right, false)] {
                        let diff = Lin {
                            slope: &la.slope - &lb.slope,
                            icept: &la.icept - &lb.icept,
                        };
                        if let Some(z) = diff.root() {
                            if (is_left && out.left_of(&z)) || (!is_left && out.right_of(&z)) {
                                out.widen(z);
                            }
                        }
                    }
                }
            }
            out
        }
    }
}

/// Interval outside which `i -> T(i, t)` is affine, or `None` if it is
/// affine everywhere.
pub fn kink_window(e: &TExpr, t: i64) -> Option<(Rational, Rational)> {
    tails(e, &q(t)).kinks
}

/// The state `U^t` induced by `e`, sampled wherever `T^t` or `T^{t+1}` is
/// not affine. Returns `Err` when `U^t` does not vanish far away.
pub fn induced_state(e: &TExpr, t: i64) -> Result<State> {
    let a = tails(e, &q(t));
    let b = tails(e, &q(t + 1));
    if a.left.slope != b.left.slope || a.right.slope != b.right.slope {
        return Err(Error::Parse("T-function does not induce a finite-support state".into()));
    }
    let Some((lo, hi)) = union(&[a, b]) else {
        return Ok(State::zero());
    };
    let lo = rational::floor_i64(&lo) - 2;
    let hi = rational::ceil_i64(&hi) + 2;
    Ok(State::from_fn(lo, hi, |i| u_from_t(e, i, t)))
}

impl fmt::Display for TExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, head: &str, xs: &[TExpr]| {
            write!(f, "({head}")?;
            for x in xs {
                write!(f, " {x}")?;
            }
            write!(f, ")")
        };
        match self {
            TExpr::Affine { a, b, d } => write!(f, "(aff {a} {b} {d})"),
            TExpr::Abs(x) => write!(f, "(abs {x})"),
            TExpr::Max(xs) => list(f, "max", xs),
            TExpr::Min(xs) => list(f, "min", xs),
            TExpr::Sum(xs) => list(f, "sum", xs),
            TExpr::Scale(c, x) => write!(f, "(scale {c} {x})"),
        }
    }
}

#[derive(Debug, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(src: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (k, ch) in src.char_indices() {
        let delim = ch == '(' || ch == ')' || ch.is_whitespace();
        if delim {
            if let Some(s) = start.take() {
                out.push(Tok::Atom(&src[s..k]));
            }
            match ch {
                '(' => out.push(Tok::Open),
                ')' => out.push(Tok::Close),
                _ => {}
            }
        } else if start.is_none() {
            start = Some(k);
        }
    }
    if let Some(s) = start {
        out.push(Tok::Atom(&src[s..]));
    }
    out
}

struct Parser<'a> {
    toks: Vec<Tok<'a>>,
    pos: usize,
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl<'a> Parser<'a> {
    fn next(&mut self) -> Option<&Tok<'a>> {
        let t = self.toks.get(self.pos);
        self.pos += 1;
        t
    }

    fn number(&mut self) -> Result<Rational> {
        match self.next() {
            Some(Tok::Atom(a)) => parse_rational(a),
            other => Err(perr(format!("expected a number, found {other:?}"))),
        }
    }

    fn close(&mut self) -> Result<()> {
        match self.next() {
            Some(Tok::Close) => Ok(()),
            other => Err(perr(format!("expected `)`, found {other:?}"))),
        }
    }

    fn children(&mut self) -> Result<Vec<TExpr>> {
        let mut xs = Vec::new();
        while let Some(tok) = self.toks.get(self.pos) {
            if *tok == Tok::Close {
                self.pos += 1;
                return Ok(xs);
            }
            xs.push(self.expr()?);
        }
        Err(perr("unbalanced parentheses"))
    }

    fn expr(&mut self) -> Result<TExpr> {
        match self.next() {
            Some(Tok::Open) => {}
            other => return Err(perr(format!("expected `(`, found {other:?}"))),
        }
        let head = match self.next() {
            Some(Tok::Atom(h)) => *h,
            other => return Err(perr(format!("expected a node name, found {other:?}"))),
        };
        let e = match head {
            "aff" => {
                let (a, b, d) = (self.number()?, self.number()?, self.number()?);
                self.close()?;
                TExpr::affine(a, b, d)
            }
            "abs" => {
                let x = self.expr()?;
                self.close()?;
                TExpr::abs(x)
            }
            "scale" => {
                let c = self.number()?;
                let x = self.expr()?;
                self.close()?;
                TExpr::scale(c, x)
            }
            "sum" => TExpr::Sum(self.children()?),
            "max" | "min" => {
                let xs = self.children()?;
                if xs.is_empty() {
                    return Err(perr(format!("`{head}` needs at least one argument")));
                }
                if head == "max" {
                    TExpr::Max(xs)
                } else {
                    TExpr::Min(xs)
                }
            }
            other => return Err(perr(format!("unknown node `{other}`"))),
        };
        Ok(e)
    }
}

impl FromStr for TExpr {
    type Err = Error;

    fn from_str(src: &str) -> Result<Self> {
        let mut p = Parser {
            toks: tokenize(src),
            pos: 0,
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(perr("trailing input after expression"));
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darboux::dress_state;
    use crate::rational::{int, rat};

    fn st(s: &str) -> State {
        s.parse().unwrap()
    }

    fn half_abs(shift: i64) -> TExpr {
        TExpr::scale(rat(1, 2), TExpr::abs(TExpr::affine(int(1), int(-1), int(-shift))))
    }

    /// `1/2 max(i - 7 - 3/2 t + |i - t - 9|, -(i - 7 - 3/2 t) + |i - t - 7|)`
    fn analytic(i: &Rational, t: &Rational) -> Rational {
        let a = i - int(7) - rat(3, 2) * t;
        let l = &a + rational::abs(&(i - t - int(9)));
        let r = -&a + rational::abs(&(i - t - int(7)));
        rational::max(l, r) / int(2)
    }

    #[test]
    fn evaluation() {
        assert_eq!(half_abs(8).eval(&int(10), &int(0)), int(1));
        let bg = background_t(&st("@9 -1/2 0 0 -1/3 0 -1")).unwrap();
        assert_eq!(bg.eval(&int(9), &int(0)), int(-3));
        let d = dress_t(&half_abs(8), &SolitonParams::new(rat(3, 2), int(7)));
        assert_eq!(d.eval(&int(8), &int(0)), int(1));
    }

    #[test]
    fn u_from_t_examples() {
        let one = TExpr::Max(vec![
            TExpr::zero(),
            TExpr::affine(int(1), rat(-17, 3), rat(-5, 2)),
        ]);
        let row: Vec<_> = (1..=9).map(|i| u_from_t(&one, i, 0)).collect();
        let expect: Vec<_> = ["0", "1/2", "1", "1", "1", "1", "1", "1/6", "0"]
            .iter()
            .map(|s| parse_rational(s).unwrap())
            .collect();
        assert_eq!(row, expect);
        assert_eq!(induced_state(&half_abs(8), 0).unwrap(), st("@8 1"));
        assert_eq!(induced_state(&TExpr::zero(), 0).unwrap(), State::zero());
    }

    #[test]
    fn background_expression() {
        let b = st("@9 -1/2 0 0 -1/3 0 -1");
        let e = background_t(&b).unwrap();
        assert_eq!(
            e.to_string(),
            "(sum (scale -1/4 (abs (aff 1 -1 -9))) (scale -1/6 (abs (aff 1 -1 -12))) (scale -1/2 (abs (aff 1 -1 -14))))"
        );
        for t in -3..5 {
            assert_eq!(induced_state(&e, t).unwrap(), b.shifted(t));
        }
        assert!(verify_bilinear(&e, -5..=25, -5..=5));
        assert_eq!(background_t(&st("@8 1")).unwrap(), TExpr::Sum(vec![half_abs(8)]));
        assert_eq!(background_t(&State::zero()).unwrap(), TExpr::zero());
        assert!(matches!(background_t(&st("1 1")), Err(Error::NotBackground(_))));
    }

    #[test]
    fn dressing_matches_closed_form() {
        let d = dress_t(&half_abs(8), &SolitonParams::new(rat(3, 2), int(7)));
        for t in -5..=15 {
            for i in -10..=30 {
                assert_eq!(d.eval(&int(i), &int(t)), analytic(&int(i), &int(t)));
            }
        }
        assert!(verify_bilinear(&d, -10..=30, -5..=15));
        let bad = TExpr::Sum(vec![d.clone(), TExpr::abs(TExpr::affine(int(1), int(1), int(-8)))]);
        assert!(!verify_bilinear(&bad, -10..=30, -5..=15));
    }

    #[test]
    fn symbolic_and_state_dressing_agree() {
        let p = SolitonParams::new(int(2), rat(7, 3));
        let bg = st("@3 -1/2 0 1/3");
        let d = dress_t(&background_t(&bg).unwrap(), &p);
        for t in -2..4 {
            let symbolic = induced_state(&d, t).unwrap();
            let state = dress_state(&bg.shifted(t), t, &p).unwrap();
            assert_eq!(symbolic, state, "t = {t}");
        }
    }

    #[test]
    fn equal_mass_dressings_commute() {
        let p = SolitonParams::new(int(2), int(3));
        let q = SolitonParams::new(int(2), rat(17, 2));
        let a = dress_t(&dress_t(&TExpr::zero(), &p), &q);
        let b = dress_t(&dress_t(&TExpr::zero(), &q), &p);
        for t in -3..6 {
            assert_eq!(induced_state(&a, t).unwrap(), induced_state(&b, t).unwrap());
        }
    }

    #[test]
    fn chain_agrees_with_tree() {
        let bg = st("@4 -1/2 0 -1/3");
        let solitons = vec![
            SolitonParams::new(rat(1, 2), rat(5, 3)),
            SolitonParams::new(rat(3, 2), int(7)),
            SolitonParams::new(int(2), rat(1, 4)),
            SolitonParams::new(int(3), int(12)),
        ];
        let chain = DressingChain::new(background_t(&bg).unwrap(), solitons);
        let tree = chain.to_texpr();
        for t in -3..4 {
            for i in -10..25 {
                let (i, t) = (rat(2 * i + 1, 2), int(t));
                assert_eq!(chain.eval(&i, &t), tree.eval(&i, &t));
            }
        }
        assert!(verify_bilinear(&chain, -10..=30, -3..=3));
    }

    #[test]
    fn chain_columns_and_windows() {
        let chain = DressingChain::new(
            background_t(&st("@2 -1/3 0 1/2")).unwrap(),
            vec![SolitonParams::new(int(1), int(3)), SolitonParams::new(rat(5, 2), rat(-2, 3))],
        );
        let col = chain.column(&rat(7, 2), &int(-2), 5);
        for (k, v) in col.iter().enumerate() {
            assert_eq!(*v, chain.eval(&rat(7, 2), &int(k as i64 - 2)));
        }
        let window = chain.state_window(-6, 20, 3);
        for i in -6..20 {
            assert_eq!(window.get(i), u_from_t(&chain, i, 3));
            assert_eq!(chain.u_at(&int(i), 3), u_from_t(&chain, i, 3));
        }
    }

    #[test]
    fn z_asymptotics() {
        let b = st("@9 -1/2 0 0 -1/3 0 -1");
        let e = background_t(&b).unwrap();
        let half_mass = b.total_mass() / int(2);
        assert_eq!(asymptotic_z(&e, 0, (-20, 40)), Some((-half_mass.clone(), half_mass.clone())));
        let d = dress_t(&e, &SolitonParams::new(int(2), int(0)));
        assert_eq!(asymptotic_z(&d, 0, (-40, 60)), Some((-half_mass.clone() - int(1), half_mass + int(1))));
        assert_eq!(asymptotic_z(&TExpr::zero(), 3, (0, 1)), Some((int(0), int(0))));
    }

    #[test]
    fn gauge_freedom() {
        let d = dress_t(&half_abs(8), &SolitonParams::new(rat(3, 2), int(7)));
        let g = TExpr::Sum(vec![d.clone(), TExpr::affine(rat(2, 3), int(-5), rat(1, 7))]);
        for t in -2..5 {
            for i in 0..20 {
                assert_eq!(u_from_t(&d, i, t), u_from_t(&g, i, t));
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let d = dress_t(&background_t(&st("@3 -1/2 1")).unwrap(), &SolitonParams::new(rat(5, 2), rat(-1, 3)));
        let text = d.to_string();
        assert_eq!(text.parse::<TExpr>().unwrap(), d);
        let e: TExpr = "(max (aff 1/2 -3/4 7) (abs (aff 2/4 -1 -9)) (min (sum) (scale 3 (aff 0 0 1))))"
            .parse()
            .unwrap();
        assert_eq!(e.to_string().parse::<TExpr>().unwrap(), e);
        for bad in ["", "(aff 1 2)", "(max)", "(foo 1)", "(abs (aff 1 1 1)", "(aff 1 1 1))", "(aff x 1 1)"] {
            assert!(bad.parse::<TExpr>().is_err(), "{bad}");
        }
    }

    #[test]
    fn depth_grows_by_a_constant_per_dressing() {
        let p = SolitonParams::new(int(2), int(0));
        let e0 = half_abs(3);
        let e1 = dress_t(&e0, &p);
        let e2 = dress_t(&e1, &p);
        assert_eq!(e1.depth() - e0.depth(), e2.depth() - e1.depth());
    }

    #[test]
    fn kink_window_covers_breakpoints() {
        let e = dress_t(&half_abs(8), &SolitonParams::new(rat(3, 2), int(7)));
        let (lo, hi) = kink_window(&e, 0).unwrap();
        assert!(lo <= int(7) && hi >= int(9));
        assert_eq!(kink_window(&TExpr::affine(int(1), int(1), int(1)), 0), None);
    }
}

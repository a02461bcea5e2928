//! Finite-support rational sequences and their text format.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::error::Error;
use crate::rational::{parse_rational, zero, Rational};

/// A finite-support, integer-indexed sequence of rationals.
///
/// Cell `i` holds `cells[i - origin]`; every other cell is zero. The stored
/// list is always trimmed so that its first and last entries are nonzero, and
/// the all-zero sequence is stored as an empty list with origin 0, so two
/// states are equal exactly when they agree at every index.
///
/// Used for udKdV states `U^t_i` as well as for derived sequences such as the
/// conserved densities.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct State {
    origin: i64,
    cells: Vec<Rational>,
}

impl State {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a state whose first listed cell sits at index `origin`.
    pub fn new(origin: i64, cells: Vec<Rational>) -> Self {
        let mut s = State { origin, cells };
        s.trim();
        s
    }

    /// Samples `f` over `lo..hi` (exclusive); everything else is zero.
    pub fn from_fn(lo: i64, hi: i64, mut f: impl FnMut(i64) -> Rational) -> Self {
        Self::new(lo, (lo..hi.max(lo)).map(&mut f).collect())
    }

    fn trim(&mut self) {
        let first = self.cells.iter().position(|c| !c.is_zero());
        match first {
            None => {
                self.cells.clear();
                self.origin = 0;
            }
            Some(k) => {
                let last = self.cells.iter().rposition(|c| !c.is_zero()).unwrap();
                self.cells.truncate(last + 1);
                self.cells.drain(..k);
                self.origin += k as i64;
            }
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.cells.is_empty()
    }

    /// Index of the first nonzero cell (0 for the trivial state).
    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn cells(&self) -> &[Rational] {
        &self.cells
    }

    /// Inclusive `(first, last)` nonzero indices, `None` when trivial.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.cells.is_empty() {
            None
        } else {
            Some((self.origin, self.origin + self.cells.len() as i64 - 1))
        }
    }

    /// Half-open index range `[lo, hi)` holding the support; empty at 0 when
    /// trivial.
    pub fn span(&self) -> (i64, i64) {
        (self.origin, self.origin + self.cells.len() as i64)
    }

    pub fn get(&self, i: i64) -> Rational {
        self.get_ref(i).cloned().unwrap_or_else(zero)
    }

    pub fn get_ref(&self, i: i64) -> Option<&Rational> {
        let k = i.checked_sub(self.origin)?;
        if k < 0 {
            return None;
        }
        self.cells.get(k as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .map(move |(k, v)| (self.origin + k as i64, v))
    }

    /// Same values moved `k` cells to the right.
    pub fn shifted(&self, k: i64) -> Self {
        if self.is_trivial() {
            return Self::zero();
        }
        State {
            origin: self.origin + k,
            cells: self.cells.clone(),
        }
    }

    /// Sum of all cells.
    pub fn total_mass(&self) -> Rational {
        self.cells.iter().sum()
    }

    /// `sum_{j < i} U_j`.
    pub fn sum_below(&self, i: i64) -> Rational {
        self.iter().take_while(|(j, _)| *j < i).map(|(_, v)| v).sum()
    }

    /// `sum_{j >= i} U_j`.
    pub fn sum_from(&self, i: i64) -> Rational {
        self.iter().filter(|(j, _)| *j >= i).map(|(_, v)| v).sum()
    }

    /// Precomputed partial sums for repeated `sum_below` / `sum_from` queries.
    pub fn partial_sums(&self) -> PartialSums {
        let mut acc = zero();
        let mut below = Vec::with_capacity(self.cells.len() + 1);
        below.push(acc.clone());
        for v in &self.cells {
            acc += v;
            below.push(acc.clone());
        }
        PartialSums {
            origin: self.origin,
            below,
        }
    }

    /// Values over `lo..hi`, padding with zeros, for tabular output.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<Rational> {
        (lo..hi).map(|i| self.get(i)).collect()
    }

    /// Text form with the given origin annotation, listing cells `lo..hi`.
    pub fn format_window(&self, lo: i64, hi: i64) -> String {
        let mut out = format!("@{lo}");
        for v in self.window(lo, hi) {
            out.push(' ');
            out.push_str(&v.to_string());
        }
        out
    }
}

impl std::ops::Add for &State {
    type Output = State;

    fn add(self, rhs: &State) -> State {
        zip_with(self, rhs, |a, b| a + b)
    }
}

impl std::ops::Sub for &State {
    type Output = State;

    fn sub(self, rhs: &State) -> State {
        zip_with(self, rhs, |a, b| a - b)
    }
}

fn zip_with(a: &State, b: &State, f: impl Fn(Rational, Rational) -> Rational) -> State {
    match joint_span([a, b]) {
        None => State::zero(),
        Some((lo, hi)) => State::from_fn(lo, hi, |i| f(a.get(i), b.get(i))),
    }
}

/// Constant-time partial sums of one state.
#[derive(Clone, Debug)]
pub struct PartialSums {
    origin: i64,
    // below[k] = sum of the first k cells
    below: Vec<Rational>,
}

impl PartialSums {
    /// `sum_{j < i} U_j`.
    pub fn below(&self, i: i64) -> Rational {
        let k = (i - self.origin).clamp(0, self.below.len() as i64 - 1);
        self.below[k as usize].clone()
    }

    /// `sum_{j >= i} U_j`.
    pub fn from(&self, i: i64) -> Rational {
        self.total() - self.below(i)
    }

    pub fn total(&self) -> Rational {
        self.below[self.below.len() - 1].clone()
    }
}

/// Smallest half-open range covering the supports of all given states.
pub fn joint_span<'a>(states: impl IntoIterator<Item = &'a State>) -> Option<(i64, i64)> {
    states
        .into_iter()
        .filter_map(|s| s.support())
        .fold(None, |acc, (a, b)| match acc {
            None => Some((a, b + 1)),
            Some((lo, hi)) => Some((lo.min(a), hi.max(b + 1))),
        })
}

/// Default origin when a state line carries no `@k` annotation.
pub const DEFAULT_ORIGIN: i64 = 1;

impl FromStr for State {
    type Err = Error;

    /// One line of whitespace-separated integers or `p/q` fractions, with an
    /// optional leading `@k` token giving the index of the first value
    /// (default 1).
    fn from_str(line: &str) -> Result<Self, Error> {
        let mut tokens = line.split_whitespace().peekable();
        let mut origin = DEFAULT_ORIGIN;
        if let Some(tok) = tokens.peek() {
            if let Some(k) = tok.strip_prefix('@') {
                origin = k
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad origin token `{tok}`")))?;
                tokens.next();
            }
        }
        let cells = tokens.map(parse_rational).collect::<Result<Vec<_>, _>>()?;
        Ok(State::new(origin, cells))
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "@0 0");
        }
        write!(f, "@{}", self.origin)?;
        for v in &self.cells {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "State({self})")
    }
}

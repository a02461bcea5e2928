//! Direct and inverse scattering.
//!
//! [`analyze`] strips solitons off a state one at a time, heaviest first,
//! until only a background is left. [`synthesize`] rebuilds the state at any
//! time by dressing the background T-function with the recorded solitons in
//! the opposite order.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::conserved::profile;
use crate::darboux::{dress_state, undress_state};
use crate::eigen::SolitonParams;
use crate::error::{Error, Result};
use crate::rational::{self, parse_rational, Rational};
use crate::state::State;
use crate::texpr::{background_t, DressingChain};

/// Soliton list and background of a state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralData {
    /// Sorted by non-increasing mass; ties keep extraction order.
    pub solitons: Vec<SolitonParams>,
    /// The remainder, translated back to `t = 0`.
    pub background: State,
    /// Time at which the analysed state was given.
    pub origin_time: i64,
}

#[derive(Serialize, Deserialize)]
struct WireSoliton {
    omega: String,
    phi: String,
}

#[derive(Serialize, Deserialize)]
struct WireState {
    origin: i64,
    cells: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct WireSpectral {
    solitons: Vec<WireSoliton>,
    background: WireState,
    origin_time: i64,
}

impl SpectralData {
    pub fn total_mass(&self) -> Rational {
        self.solitons.iter().map(|p| &p.omega).sum::<Rational>() + self.background.total_mass()
    }

    /// The solitons in the order they are added back: non-decreasing mass,
    /// recorded order within equal masses.
    pub fn insertion_order(&self) -> Vec<SolitonParams> {
        let mut out = self.solitons.clone();
        out.sort_by(|a, b| a.omega.cmp(&b.omega));
        out
    }

    /// JSON with every rational written as a `"p/q"` string.
    pub fn to_json(&self) -> String {
        let wire = WireSpectral {
            solitons: self
                .solitons
                .iter()
                .map(|p| WireSoliton {
                    omega: p.omega.to_string(),
                    phi: p.phi.to_string(),
                })
                .collect(),
            background: WireState {
                origin: self.background.origin(),
                cells: self.background.cells().iter().map(|v| v.to_string()).collect(),
            },
            origin_time: self.origin_time,
        };
        serde_json::to_string_pretty(&wire).expect("serialising spectral data")
    }

    pub fn from_json(src: &str) -> Result<Self> {
        let wire: WireSpectral = serde_json::from_str(src).map_err(|e| Error::Parse(e.to_string()))?;
        let solitons = wire
            .solitons
            .iter()
            .map(|w| Ok(SolitonParams::new(parse_rational(&w.omega)?, parse_rational(&w.phi)?)))
            .collect::<Result<Vec<_>>>()?;
        let cells = wire
            .background
            .cells
            .iter()
            .map(|c| parse_rational(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(SpectralData {
            solitons,
            background: State::new(wire.background.origin, cells),
            origin_time: wire.origin_time,
        })
    }
}

/// Knobs for [`analyze_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Stop once every remaining soliton has mass at most 1; the remainder
    /// then moves rigidly at speed 1 and is kept as background.
    pub halt_speed_one: bool,
}

/// Always picks the left-most maximal block.
pub fn leftmost(_step: usize, _blocks: usize) -> usize {
    0
}

/// Full undressing of `s` taken as the state at `t = 0`.
pub fn analyze(s: &State) -> Result<SpectralData> {
    analyze_at(s, 0)
}

/// Full undressing of `s` taken as the state at time `t`.
pub fn analyze_at(s: &State, t: i64) -> Result<SpectralData> {
    analyze_with(s, t, AnalyzeOptions::default(), leftmost)
}

/// Undresses `s = U^t` repeatedly. Before step `k` the callback receives
/// `(k, number of maximal blocks)` and returns the block to remove.
pub fn analyze_with(
    s: &State,
    t: i64,
    opts: AnalyzeOptions,
    mut choose: impl FnMut(usize, usize) -> usize,
) -> Result<SpectralData> {
    let mut cur = s.clone();
    let mut solitons = Vec::new();
    let limit = 1 + s.cells().len() * 64 + rational::ceil_i64(&s.cells().iter().map(rational::abs).sum()) as usize * 64;
    loop {
        let prof = profile(&cur);
        if prof.omega_max.is_zero() || (opts.halt_speed_one && prof.omega_max <= Rational::one()) {
            break;
        }
        if solitons.len() > limit {
            return Err(Error::breach("undressing does not terminate"));
        }
        let block = choose(solitons.len(), prof.blocks.len());
        let (next, p) = undress_state(&cur, t, block)?;
        solitons.push(p);
        cur = next;
    }
    solitons.sort_by(|a, b| b.omega.cmp(&a.omega));
    Ok(SpectralData {
        solitons,
        background: cur.shifted(-t),
        origin_time: t,
    })
}

/// Background T-function dressed with every soliton of `d`.
pub fn reconstruction_chain(d: &SpectralData) -> Result<DressingChain> {
    Ok(DressingChain::new(background_t(&d.background)?, d.insertion_order()))
}

/// The state at time `t` described by `d`.
///
/// Computed twice: symbolically, as the udKdV field of the dressed
/// background T-function, and by state-level dressing of the background at
/// time `t`. The two must agree cell by cell; the state-level pass also
/// supplies the support window for the symbolic one.
pub fn synthesize(d: &SpectralData, t: i64) -> Result<State> {
    let chain = reconstruction_chain(d)?;
    let mut cur = d.background.shifted(t);
    for p in &chain.solitons {
        cur = dress_state(&cur, t, p)?;
    }
    let (lo, hi) = cur.span();
    if chain.state_window(lo - 2, hi + 2, t) != cur {
        return Err(Error::breach("symbolic and state-level reconstructions differ"));
    }
    Ok(cur)
}

/// `U^t` for the initial state `s = U^0`, via scattering.
pub fn solve_cauchy(s: &State, t: i64) -> Result<State> {
    synthesize(&analyze(s)?, t)
}

/// The isolated soliton `p` at time `t`: cell `i` holds `kappa` times the
/// length of `[i, i + 1]` inside `[phi^t, phi^t + c]`.
pub fn soliton_state(p: &SolitonParams, t: i64) -> Result<State> {
    if p.omega <= Rational::zero() {
        return Err(Error::DegenerateOmega(p.omega.clone()));
    }
    let a = p.phase_at(t);
    let b = &a + &p.c;
    let lo = rational::floor_i64(&a);
    let hi = rational::ceil_i64(&b);
    Ok(State::from_fn(lo, hi, |i| {
        let left = rational::max(Rational::from_integer(i.into()), a.clone());
        let right = rational::min(Rational::from_integer((i + 1).into()), b.clone());
        &p.kappa * rational::max(right - left, Rational::zero())
    }))
}

/// `U^t(x)` of the reconstructed solution on the grid
/// `x_from, x_from + step, ...` up to `x_to`.
pub fn real_profile(
    d: &SpectralData,
    t: i64,
    x_from: &Rational,
    x_to: &Rational,
    step: &Rational,
) -> Result<Vec<(Rational, Rational)>> {
    if *step <= Rational::zero() {
        return Err(Error::InvalidArgument(format!("step must be positive, got {step}")));
    }
    if x_from > x_to {
        return Err(Error::InvalidArgument(format!("empty range {x_from}..{x_to}")));
    }
    let chain = reconstruction_chain(d)?;
    let mut out = Vec::new();
    let mut x = x_from.clone();
    while x <= *x_to {
        let v = chain.u_at(&x, t);
        out.push((x.clone(), v));
        x += step;
    }
    Ok(out)
}

//! Walker state on a `d`-vertex cycle and the elementary O(d) kernels.
//!
//! Amplitudes are stored interleaved, `index = 2x + σ`, with `σ = 0` for spin
//! `+1` and `σ = 1` for spin `-1`. Every kernel mutates the state in place and
//! never materializes an operator matrix; dense matrices live in
//! [`crate::oracle`] only.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{FieldKind, WalkConfig};
use crate::error::{Error, Result};

/// Coin (spin) degree of freedom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn offset(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    /// Eigenvalue of σ_z, `+1` or `-1`.
    pub fn sign(self) -> f64 {
        match self {
            Spin::Up => 1.0,
            Spin::Down => -1.0,
        }
    }

    pub fn from_sign(s: i32) -> Result<Self> {
        match s {
            1 => Ok(Spin::Up),
            -1 => Ok(Spin::Down),
            other => Err(Error::domain(format!("spin must be +1 or -1, got {other}"))),
        }
    }
}

/// Reduces `angle` into `[0, 2π)` before taking `e^{i angle}`.
#[inline]
fn cis(angle: f64) -> Complex64 {
    Complex64::cis(angle.rem_euclid(TAU))
}

/// Phase `e^{i α (2πq/d) x}`. Integer exponents are reduced modulo `d` in
/// integer arithmetic first, so the phase is exact and single-valued on the cycle.
pub fn electric_phase(alpha: f64, q: u32, d: usize, x: usize) -> Complex64 {
    if alpha.fract() == 0.0 && alpha.abs() < 1e15 {
        let d_i = d as i128;
        let k = (alpha as i128 * i128::from(q) * x as i128).rem_euclid(d_i);
        Complex64::cis(TAU * k as f64 / d as f64)
    } else {
        cis(alpha * TAU * f64::from(q) * x as f64 / d as f64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|x, s⟩`.
    pub fn basis_state(d: usize, x: usize, s: Spin) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("d must be >= 2, got {d}")));
        }
        if x >= d {
            return Err(Error::domain(format!("site {x} out of range for d = {d}")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * d];
        amps[2 * x + s.offset()] = Complex64::new(1.0, 0.0);
        Ok(StateVector { amps })
    }

    /// `½(|⌊d/2⌋⟩ + |⌊d/2⌋+1⟩) ⊗ (|+1⟩ − i|−1⟩)`.
    pub fn init_two_site(d: usize) -> Result<Self> {
        if d < 4 {
            return Err(Error::domain(format!(
                "two-site initial state needs d >= 4, got {d}"
            )));
        }
        let x0 = d / 2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * d];
        for x in [x0, x0 + 1] {
            amps[2 * x] = Complex64::new(0.5, 0.0);
            amps[2 * x + 1] = Complex64::new(0.0, -0.5);
        }
        Ok(StateVector { amps })
    }

    /// `|⌊d/2⌋⟩ ⊗ (|+1⟩ − i|−1⟩)/√2`.
    pub fn init_single_site(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::domain(format!("d must be >= 2, got {d}")));
        }
        let x0 = d / 2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * d];
        amps[2 * x0] = Complex64::new(FRAC_1_SQRT_2, 0.0);
        amps[2 * x0 + 1] = Complex64::new(0.0, -FRAC_1_SQRT_2);
        Ok(StateVector { amps })
    }

    /// Wraps raw amplitudes, checking length and normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 4 || !amps.len().is_multiple_of(2) {
            return Err(Error::domain(format!(
                "amplitude vector length {} is not 2d with d >= 2",
                amps.len()
            )));
        }
        let s = StateVector { amps };
        let n = s.norm_sqr();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "state is not normalized: |psi|^2 = {n}"
            )));
        }
        Ok(s)
    }

    pub fn d(&self) -> usize {
        self.amps.len() / 2
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, x: usize, s: Spin) -> Complex64 {
        self.amps[2 * x + s.offset()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `S|x,±1⟩ = |x±1,±1⟩` on the cycle.
    pub fn apply_step(&mut self) -> &mut Self {
        let d = self.d();
        let a = &mut self.amps;
        // spin +: x -> x+1
        let last = a[2 * (d - 1)];
        for x in (1..d).rev() {
            a[2 * x] = a[2 * (x - 1)];
        }
        a[0] = last;
        // spin -: x -> x-1
        let first = a[1];
        for x in 0..d - 1 {
            a[2 * x + 1] = a[2 * x + 3];
        }
        a[2 * d - 1] = first;
        self
    }

    /// Site-local `C = e^{-iθσ_y}`, the real rotation `[[cos θ, −sin θ], [sin θ, cos θ]]`.
    pub fn apply_coin(&mut self, theta: f64) -> &mut Self {
        let (s, c) = theta.sin_cos();
        for pair in self.amps.chunks_exact_mut(2) {
            let (up, down) = (pair[0], pair[1]);
            pair[0] = up * c - down * s;
            pair[1] = up * s + down * c;
        }
        self
    }

    /// `Φ_B|x,±⟩ = e^{±iφx}|x,±⟩`.
    pub fn apply_phase_b(&mut self, phi: f64) -> &mut Self {
        for (x, pair) in self.amps.chunks_exact_mut(2).enumerate() {
            let w = cis(phi * x as f64);
            pair[0] *= w;
            pair[1] *= w.conj();
        }
        self
    }

    /// `Φ_E^α|x,±⟩ = e^{iαφx}|x,±⟩`.
    pub fn apply_phase_e(&mut self, phi: f64, alpha: f64) -> &mut Self {
        for (x, pair) in self.amps.chunks_exact_mut(2).enumerate() {
            let w = cis(alpha * phi * x as f64);
            pair[0] *= w;
            pair[1] *= w;
        }
        self
    }

    /// `e^{iβΩ_z}` with `Ω_z = I ⊗ σ_z`.
    pub fn apply_spin_rotation_z(&mut self, beta: f64) -> &mut Self {
        let w = cis(beta);
        let wc = w.conj();
        for pair in self.amps.chunks_exact_mut(2) {
            pair[0] *= w;
            pair[1] *= wc;
        }
        self
    }

    /// One field-free walk step, `U = (I ⊗ C) S`.
    pub fn apply_u(&mut self, config: &WalkConfig) -> &mut Self {
        self.apply_step().apply_coin(config.theta)
    }

    /// Multiplies by a precomputed diagonal table.
    pub fn apply_table(&mut self, table: &PhaseTable) -> &mut Self {
        debug_assert_eq!(table.phases.len(), self.amps.len());
        for (a, w) in self.amps.iter_mut().zip(&table.phases) {
            *a *= *w;
        }
        self
    }

    /// Spin-marginalized Born probabilities, writing into `out` (length `d`).
    pub fn probabilities_into(&self, out: &mut [f64]) {
        for (p, pair) in out.iter_mut().zip(self.amps.chunks_exact(2)) {
            *p = pair[0].norm_sqr() + pair[1].norm_sqr();
        }
    }

    pub fn distribution(&self) -> ProbabilityDistribution {
        let mut p = vec![0.0; self.d()];
        self.probabilities_into(&mut p);
        ProbabilityDistribution {
            p,
            origin: self.d() / 2,
        }
    }
}

/// Diagonal phase operator with every factor computed directly from its site
/// label, used in the hot loop instead of recomputing `cis` per step.
#[derive(Debug, Clone)]
pub struct PhaseTable {
    phases: Vec<Complex64>,
}

impl PhaseTable {
    /// Table for the field selected by `config` (`None` when there is no field).
    pub fn for_config(config: &WalkConfig) -> Option<Self> {
        match config.field {
            FieldKind::None => None,
            FieldKind::Electric => Some(Self::electric(config.d, config.q, 1.0)),
            FieldKind::SpinPosition => Some(Self::spin_position(config.d, config.q)),
        }
    }

    pub fn electric(d: usize, q: u32, alpha: f64) -> Self {
        let phases = (0..d)
            .flat_map(|x| {
                let w = electric_phase(alpha, q, d, x);
                [w, w]
            })
            .collect();
        PhaseTable { phases }
    }

    pub fn spin_position(d: usize, q: u32) -> Self {
        let phases = (0..d)
            .flat_map(|x| {
                let w = electric_phase(1.0, q, d, x);
                [w, w.conj()]
            })
            .collect();
        PhaseTable { phases }
    }
}

/// Spin-marginalized position distribution on the cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    p: Vec<f64>,
    origin: usize,
}

impl ProbabilityDistribution {
    pub fn new(p: Vec<f64>, origin: usize) -> Result<Self> {
        if p.len() < 2 {
            return Err(Error::domain("distribution needs at least 2 sites"));
        }
        if origin >= p.len() {
            return Err(Error::domain(format!(
                "origin {origin} out of range for d = {}",
                p.len()
            )));
        }
        if let Some(bad) = p.iter().find(|v| **v < 0.0 || !v.is_finite()) {
            return Err(Error::domain(format!(
                "negative or non-finite probability {bad}"
            )));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(ProbabilityDistribution { p, origin })
    }

    pub fn d(&self) -> usize {
        self.p.len()
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn with_origin(mut self, origin: usize) -> Result<Self> {
        if origin >= self.p.len() {
            return Err(Error::domain(format!(
                "origin {origin} out of range for d = {}",
                self.p.len()
            )));
        }
        self.origin = origin;
        Ok(self)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.p
    }
}

/// Initial states selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    Single,
    TwoSite,
    Basis { x: usize, spin: i32 },
}

impl InitialState {
    pub fn build(&self, d: usize) -> Result<StateVector> {
        match *self {
            InitialState::Single => StateVector::init_single_site(d),
            InitialState::TwoSite => StateVector::init_two_site(d),
            InitialState::Basis { x, spin } => {
                StateVector::basis_state(d, x, Spin::from_sign(spin)?)
            }
        }
    }

    /// Reference site for displacement statistics.
    pub fn origin(&self, d: usize) -> usize {
        match *self {
            InitialState::Single | InitialState::TwoSite => d / 2,
            InitialState::Basis { x, .. } => x,
        }
    }
}

impl FromStr for InitialState {
    type Err = Error;

    /// `single`, `two-site`, or `x:<int>,s:<±1>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(InitialState::Single),
            "two-site" | "two_site" | "two" => Ok(InitialState::TwoSite),
            other => {
                let bad = || {
                    Error::Parse(format!(
                        "bad initial state `{other}` (expected single|two-site|x:<int>,s:<+-1>)"
                    ))
                };
                let (xs, ss) = other.split_once(',').ok_or_else(bad)?;
                let x = xs
                    .strip_prefix("x:")
                    .and_then(|v| v.parse::<usize>().ok())
                    .ok_or_else(bad)?;
                let spin = ss
                    .strip_prefix("s:")
                    .and_then(|v| v.trim_start_matches('+').parse::<i32>().ok())
                    .ok_or_else(bad)?;
                Spin::from_sign(spin)?;
                Ok(InitialState::Basis { x, spin })
            }
        }
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InitialState::Single => f.write_str("single"),
            InitialState::TwoSite => f.write_str("two-site"),
            InitialState::Basis { x, spin } => write!(f, "x:{x},s:{spin:+}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn max_diff(a: &StateVector, b: &StateVector) -> f64 {
        a.amplitudes()
            .iter()
            .zip(b.amplitudes())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn basis_state_layout() {
        let s = StateVector::basis_state(4, 2, Spin::Up).unwrap();
        assert_eq!(s.amplitudes()[4], c(1.0, 0.0));
        assert_eq!(s.amplitudes().iter().filter(|a| a.norm() > 0.0).count(), 1);
        let s = StateVector::basis_state(4, 3, Spin::Down).unwrap();
        assert_eq!(s.amplitudes()[7], c(1.0, 0.0));
        assert!(StateVector::basis_state(4, 4, Spin::Up).is_err());
    }

    #[test]
    fn two_site_initial_state() {
        let s = StateVector::init_two_site(501).unwrap();
        let nz: Vec<usize> = (0..1002)
            .filter(|&i| s.amplitudes()[i].norm() > 0.0)
            .collect();
        assert_eq!(nz, vec![500, 501, 502, 503]);
        assert_eq!(s.amplitude(250, Spin::Up), c(0.5, 0.0));
        assert_eq!(s.amplitude(250, Spin::Down), c(0.0, -0.5));
        assert_eq!(s.amplitude(251, Spin::Up), c(0.5, 0.0));
        assert_eq!(s.amplitude(251, Spin::Down), c(0.0, -0.5));
        assert_eq!(s.norm_sqr(), 1.0);

        let s = StateVector::init_two_site(4).unwrap();
        assert_eq!(s.distribution().probabilities(), &[0.0, 0.0, 0.5, 0.5]);
        assert!(StateVector::init_two_site(3).is_err());
    }

    #[test]
    fn single_site_initial_state() {
        let s = StateVector::init_single_site(501).unwrap();
        let p = s.distribution();
        assert_abs_diff_eq!(p.probabilities()[250], 1.0, epsilon = 1e-15);
        assert_eq!(s.amplitude(250, Spin::Down), c(0.0, -FRAC_1_SQRT_2));
        let s = StateVector::init_single_site(2).unwrap();
        assert_abs_diff_eq!(s.distribution().probabilities()[1], 1.0, epsilon = 1e-15);
        assert!(StateVector::init_single_site(1).is_err());
    }

    #[test]
    fn step_shifts_and_wraps() {
        let mut s = StateVector::basis_state(5, 2, Spin::Up).unwrap();
        s.apply_step();
        assert_eq!(s, StateVector::basis_state(5, 3, Spin::Up).unwrap());

        let mut s = StateVector::basis_state(5, 0, Spin::Down).unwrap();
        s.apply_step();
        assert_eq!(s, StateVector::basis_state(5, 4, Spin::Down).unwrap());

        let mut s = StateVector::basis_state(5, 4, Spin::Up).unwrap();
        s.apply_step();
        assert_eq!(s, StateVector::basis_state(5, 0, Spin::Up).unwrap());

        let h = FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0, 0.0); 10];
        amps[2] = c(h, 0.0);
        amps[3] = c(h, 0.0);
        let mut s = StateVector::from_amplitudes(amps).unwrap();
        s.apply_step();
        assert_eq!(s.amplitude(2, Spin::Up), c(h, 0.0));
        assert_eq!(s.amplitude(0, Spin::Down), c(h, 0.0));
        assert_abs_diff_eq!(s.norm_sqr(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn coin_rotations() {
        let mut s = StateVector::init_single_site(6).unwrap();
        let before = s.clone();
        s.apply_coin(0.0);
        assert_eq!(s, before);

        let mut s = StateVector::basis_state(3, 1, Spin::Up).unwrap();
        s.apply_coin(FRAC_PI_4);
        assert_abs_diff_eq!(s.amplitude(1, Spin::Up).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            s.amplitude(1, Spin::Down).re,
            FRAC_1_SQRT_2,
            epsilon = 1e-15
        );

        let mut s = StateVector::basis_state(3, 1, Spin::Down).unwrap();
        s.apply_coin(FRAC_PI_2);
        assert_abs_diff_eq!(s.amplitude(1, Spin::Up).re, -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.amplitude(1, Spin::Down).norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn phase_b_values() {
        let phi = TAU / 8.0;
        let mut s = StateVector::basis_state(8, 3, Spin::Down).unwrap();
        s.apply_phase_b(phi);
        let expected = Complex64::cis(-3.0 * PI / 4.0);
        assert_abs_diff_eq!(
            (s.amplitude(3, Spin::Down) - expected).norm(),
            0.0,
            epsilon = 1e-15
        );

        for spin in [Spin::Up, Spin::Down] {
            let mut s = StateVector::basis_state(8, 0, spin).unwrap();
            s.apply_phase_b(phi);
            assert_eq!(s.amplitude(0, spin), c(1.0, 0.0));
        }
    }

    #[test]
    fn phase_e_values() {
        let phi = TAU / 8.0;
        for spin in [Spin::Up, Spin::Down] {
            let mut s = StateVector::basis_state(8, 3, spin).unwrap();
            s.apply_phase_e(phi, 1.0);
            let expected = Complex64::cis(3.0 * PI / 4.0);
            assert_abs_diff_eq!(
                (s.amplitude(3, spin) - expected).norm(),
                0.0,
                epsilon = 1e-15
            );
        }
        let mut s = StateVector::init_two_site(8).unwrap();
        let before = s.clone();
        s.apply_phase_e(phi, 0.0);
        assert_eq!(s, before);
    }

    #[test]
    fn spin_rotation_z() {
        let mut s = StateVector::basis_state(4, 1, Spin::Up).unwrap();
        s.apply_spin_rotation_z(PI);
        assert_abs_diff_eq!(
            (s.amplitude(1, Spin::Up) - c(-1.0, 0.0)).norm(),
            0.0,
            epsilon = 1e-15
        );
        let mut s = StateVector::init_two_site(6).unwrap();
        let before = s.clone();
        s.apply_spin_rotation_z(0.0);
        assert_eq!(s, before);
    }

    #[test]
    fn walk_step_examples() {
        let cfg = WalkConfig {
            d: 5,
            theta: FRAC_PI_4,
            ..WalkConfig::default()
        };
        let mut s = StateVector::basis_state(5, 1, Spin::Up).unwrap();
        s.apply_u(&cfg);
        assert_abs_diff_eq!(s.amplitude(2, Spin::Up).re, FRAC_1_SQRT_2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            s.amplitude(2, Spin::Down).re,
            FRAC_1_SQRT_2,
            epsilon = 1e-15
        );

        let cfg = WalkConfig {
            d: 4,
            theta: 0.0,
            ..WalkConfig::default()
        };
        let mut s = StateVector::basis_state(4, 0, Spin::Up).unwrap();
        s.apply_u(&cfg);
        assert_eq!(s, StateVector::basis_state(4, 1, Spin::Up).unwrap());
        for _ in 0..3 {
            s.apply_u(&cfg);
        }
        assert_eq!(s, StateVector::basis_state(4, 0, Spin::Up).unwrap());
    }

    #[test]
    fn distributions_of_initial_states() {
        let p = StateVector::init_two_site(10).unwrap().distribution();
        assert_abs_diff_eq!(p.probabilities()[5], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p.probabilities()[6], 0.5, epsilon = 1e-15);
        assert!(ProbabilityDistribution::new(vec![0.5, 0.6], 0).is_err());
        assert!(ProbabilityDistribution::new(vec![1.5, -0.5], 0).is_err());
    }

    #[test]
    fn electric_phase_is_single_valued_on_the_cycle() {
        for (d, q) in [(8usize, 1u32), (501, 1), (501, 200), (17, 5)] {
            let phi = TAU * f64::from(q) / d as f64;
            let wrap = electric_phase(1.0, q, d, d - 1) * Complex64::cis(phi);
            assert!((wrap - electric_phase(1.0, q, d, 0)).norm() < 1e-12);
            let mut s = StateVector::basis_state(d, d - 1, Spin::Up).unwrap();
            s.apply_phase_e(phi, 1.0);
            let w = s.amplitude(d - 1, Spin::Up) * Complex64::cis(phi);
            assert!((w - c(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn phase_table_matches_kernels() {
        let d = 13;
        let cfg = WalkConfig {
            d,
            q: 3,
            ..WalkConfig::default()
        };
        let mut a = StateVector::init_two_site(d).unwrap();
        a.apply_u(&cfg);
        let mut b = a.clone();
        a.apply_table(&PhaseTable::electric(d, 3, 1.0));
        b.apply_phase_e(cfg.phi(), 1.0);
        assert!(max_diff(&a, &b) < 1e-13);
        let mut b2 = a.clone();
        a.apply_table(&PhaseTable::spin_position(d, 3));
        b2.apply_phase_b(cfg.phi());
        assert!(max_diff(&a, &b2) < 1e-13);
    }

    #[test]
    fn initial_state_strings() {
        for s in ["single", "two-site", "x:3,s:-1", "x:0,s:+1"] {
            let init: InitialState = s.parse().unwrap();
            assert_eq!(init.to_string(), s);
        }
        assert!("x:3,s:2".parse::<InitialState>().is_err());
        assert!("middle".parse::<InitialState>().is_err());
    }

    fn arb_state(d: usize) -> impl Strategy<Value = StateVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2 * d).prop_filter_map(
            "zero vector",
            |v| {
                let amps: Vec<Complex64> = v.into_iter().map(|(re, im)| c(re, im)).collect();
                let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                (n > 1e-3).then(|| {
                    StateVector::from_amplitudes(amps.into_iter().map(|a| a / n).collect()).unwrap()
                })
            },
        )
    }

    proptest! {
        #[test]
        fn norm_is_preserved_by_long_sequences(s0 in arb_state(7), ops in prop::collection::vec(0u8..6, 1..2000), theta in -3.2f64..3.2) {
            let cfg = WalkConfig { d: 7, q: 2, theta, ..WalkConfig::default() };
            let mut s = s0;
            for op in ops {
                match op {
                    0 => { s.apply_step(); }
                    1 => { s.apply_coin(theta); }
                    2 => { s.apply_phase_b(cfg.phi()); }
                    3 => { s.apply_phase_e(cfg.phi(), 0.37); }
                    4 => { s.apply_spin_rotation_z(1.3); }
                    _ => { s.apply_u(&cfg); }
                }
            }
            prop_assert!((s.norm_sqr() - 1.0).abs() <= 1e-9);
        }

        #[test]
        fn u_is_coin_after_step(s0 in arb_state(9), theta in -3.2f64..3.2) {
            let cfg = WalkConfig { d: 9, theta, ..WalkConfig::default() };
            let mut a = s0.clone();
            a.apply_u(&cfg);
            let mut b = s0;
            b.apply_step();
            b.apply_coin(theta);
            prop_assert!(max_diff(&a, &b) <= 1e-15);
        }

        #[test]
        fn phase_e_exponents_add(s0 in arb_state(11), alpha in -2.0f64..2.0, beta in -2.0f64..2.0) {
            let phi = TAU / 11.0;
            let mut a = s0.clone();
            a.apply_phase_e(phi, alpha).apply_phase_e(phi, beta);
            let mut b = s0;
            b.apply_phase_e(phi, alpha + beta);
            prop_assert!(max_diff(&a, &b) <= 1e-12);
        }

        #[test]
        fn diagonal_kernels_keep_the_distribution(s0 in arb_state(6), beta in -4.0f64..4.0) {
            let p0 = s0.distribution();
            for op in 0..3 {
                let mut s = s0.clone();
                match op {
                    0 => { s.apply_phase_b(beta); }
                    1 => { s.apply_phase_e(beta, 0.7); }
                    _ => { s.apply_spin_rotation_z(beta); }
                }
                let p = s.distribution();
                for (x, y) in p.probabilities().iter().zip(p0.probabilities()) {
                    prop_assert!((x - y).abs() <= 1e-14);
                }
            }
        }
    }
}

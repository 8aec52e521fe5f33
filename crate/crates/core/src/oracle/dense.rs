use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::config::WalkConfig;
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Largest cycle the dense path accepts.
pub const MAX_DENSE_D: usize = 32;

/// `2d × 2d` complex matrix in the interleaved `(x, spin)` basis of [`StateVector`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    m: DMatrix<Complex64>,
}

/// Operators the oracle can materialize.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorKind {
    Step,
    Coin,
    PhaseB,
    /// `Φ_E^α`.
    PhaseE {
        alpha: f64,
    },
    OmegaZ,
    /// `e^{iβΩ_z}`.
    SpinRotationZ {
        beta: f64,
    },
    /// `U = (I ⊗ C) S`.
    Walk,
    /// `V_t = Σ_x |x⟩⟨x| ⊗ e^{iηxt}` with `η = −2φ(1−r)²`.
    Gauge {
        t: i64,
    },
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn unit(angle: f64) -> Complex64 {
    Complex64::from_polar(1.0, angle)
}

pub(crate) fn check_d(d: usize) -> Result<()> {
    if d > MAX_DENSE_D {
        return Err(Error::TooLarge {
            d,
            max: MAX_DENSE_D,
        });
    }
    if d < 2 {
        return Err(Error::domain(format!("d must be >= 2, got {d}")));
    }
    Ok(())
}

/// Gauge rate `η = −2φ(1−r)²`.
pub fn gauge_rate(phi: f64, r: f64) -> f64 {
    -2.0 * phi * (1.0 - r).powi(2)
}

impl DenseOperator {
    pub fn identity(d: usize) -> Self {
        DenseOperator {
            m: DMatrix::identity(2 * d, 2 * d),
        }
    }

    pub fn zeros(d: usize) -> Self {
        DenseOperator {
            m: DMatrix::zeros(2 * d, 2 * d),
        }
    }

    /// Diagonal operator with entry `f(x, spin_sign)` at `(2x+σ, 2x+σ)`.
    pub fn diagonal(d: usize, f: impl Fn(usize, f64) -> Complex64) -> Self {
        let mut m = DMatrix::zeros(2 * d, 2 * d);
        for x in 0..d {
            m[(2 * x, 2 * x)] = f(x, 1.0);
            m[(2 * x + 1, 2 * x + 1)] = f(x, -1.0);
        }
        DenseOperator { m }
    }

    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) || m.nrows() < 4 {
            return Err(Error::domain(format!(
                "{}x{} is not a 2d x 2d matrix",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(DenseOperator { m })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn d(&self) -> usize {
        self.dim() / 2
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator {
            m: self.m.adjoint(),
        }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        DenseOperator { m: &self.m * k }
    }

    /// `‖A‖_max`, the largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖A†A − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        (&(&self.adjoint() * self) - &DenseOperator::identity(self.d())).max_abs()
    }

    /// Max entry modulus over the columns of sites `margin ..= d−1−margin`.
    ///
    /// A product of `k` walk steps only reaches the cycle seam from columns
    /// within `k` sites of it, so `margin = k` isolates the seam-free block.
    pub fn max_abs_seam_free(&self, margin: usize) -> Option<f64> {
        let d = self.d();
        if d < 2 * margin + 1 {
            return None;
        }
        let cols = (2 * margin)..(2 * (d - margin));
        Some(
            cols.flat_map(|j| {
                self.m
                    .column(j)
                    .iter()
                    .map(|z| z.norm())
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max),
        )
    }

    /// Max entry modulus over the columns excluded by [`Self::max_abs_seam_free`].
    pub fn max_abs_seam(&self, margin: usize) -> f64 {
        let d = self.d();
        (0..self.dim())
            .filter(|j| {
                let x = j / 2;
                x < margin || x + margin > d - 1
            })
            .flat_map(|j| {
                self.m
                    .column(j)
                    .iter()
                    .map(|z| z.norm())
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    }

    pub fn apply(&self, state: &StateVector) -> Vec<Complex64> {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        (&self.m * v).iter().copied().collect()
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator {
            m: &self.m * &rhs.m,
        }
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator {
            m: &self.m + &rhs.m,
        }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator {
            m: &self.m - &rhs.m,
        }
    }
}

/// Builds the dense matrix of `kind` directly from its definition.
pub fn dense_of(kind: OperatorKind, config: &WalkConfig) -> Result<DenseOperator> {
    let d = config.d;
    check_d(d)?;
    let phi = config.phi();
    let n = 2 * d;
    let op = match kind {
        OperatorKind::Step => {
            let mut m = DMatrix::zeros(n, n);
            for x in 0..d {
                m[(2 * ((x + 1) % d), 2 * x)] = c(1.0);
                m[(2 * ((x + d - 1) % d) + 1, 2 * x + 1)] = c(1.0);
            }
            DenseOperator { m }
        }
        OperatorKind::Coin => {
            let (s, co) = config.theta.sin_cos();
            let mut m = DMatrix::zeros(n, n);
            for x in 0..d {
                m[(2 * x, 2 * x)] = c(co);
                m[(2 * x, 2 * x + 1)] = c(-s);
                m[(2 * x + 1, 2 * x)] = c(s);
                m[(2 * x + 1, 2 * x + 1)] = c(co);
            }
            DenseOperator { m }
        }
        OperatorKind::PhaseB => DenseOperator::diagonal(d, |x, s| unit(s * phi * x as f64)),
        OperatorKind::PhaseE { alpha } => {
            DenseOperator::diagonal(d, |x, _| unit(alpha * phi * x as f64))
        }
        OperatorKind::OmegaZ => DenseOperator::diagonal(d, |_, s| c(s)),
        OperatorKind::SpinRotationZ { beta } => DenseOperator::diagonal(d, |_, s| unit(s * beta)),
        OperatorKind::Walk => {
            let coin = dense_of(OperatorKind::Coin, config)?;
            let step = dense_of(OperatorKind::Step, config)?;
            &coin * &step
        }
        OperatorKind::Gauge { t } => {
            let eta = gauge_rate(phi, config.r);
            DenseOperator::diagonal(d, |x, _| unit(eta * x as f64 * t as f64))
        }
    };
    Ok(op)
}

/// `ab − ba`.
pub fn commutator(a: &DenseOperator, b: &DenseOperator) -> Result<DenseOperator> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(a.dim(), b.dim()));
    }
    Ok(&(a * b) - &(b * a))
}

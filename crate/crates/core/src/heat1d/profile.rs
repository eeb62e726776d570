use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{Field1D, Grid1D};

/// Shape of a background profile `f(x2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ProfileKind<T> {
    Gaussian {
        width: T,
    },
    /// `-(x/w) e^{-x²/2w²}`, mean free.
    DerivativeGaussian {
        width: T,
    },
    /// `exp(-(1 - cos(2πx/L)) (L/2πw)²)`, periodic by construction.
    PeriodicBump {
        width: T,
    },
    CosinePacket {
        wavenumber: T,
        width: T,
    },
}

/// Background profile `amplitude · shape(x2 - center)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Profile<T> {
    pub kind: ProfileKind<T>,
    pub amplitude: T,
    /// `None` centres the profile at `L/2`.
    pub center: Option<T>,
}

impl<T: Real> Profile<T> {
    pub fn gaussian(width: T, amplitude: T) -> Self {
        Self {
            kind: ProfileKind::Gaussian { width },
            amplitude,
            center: None,
        }
    }

    pub fn new(kind: ProfileKind<T>, amplitude: T) -> Self {
        Self {
            kind,
            amplitude,
            center: None,
        }
    }

    pub fn width(&self) -> T {
        match self.kind {
            ProfileKind::Gaussian { width }
            | ProfileKind::DerivativeGaussian { width }
            | ProfileKind::PeriodicBump { width }
            | ProfileKind::CosinePacket { width, .. } => width,
        }
    }

    fn shape(&self, r: T, length: T) -> T {
        let half = T::lit(0.5);
        match self.kind {
            ProfileKind::Gaussian { width } => (-half * (r / width).powi(2)).exp(),
            ProfileKind::DerivativeGaussian { width } => {
                let z = r / width;
                -z * (-half * z * z).exp()
            }
            ProfileKind::PeriodicBump { width } => {
                let s = length / (T::TAU() * width);
                (-(T::one() - (T::TAU() * r / length).cos()) * s * s).exp()
            }
            ProfileKind::CosinePacket { wavenumber, width } => {
                (wavenumber * r).cos() * (-half * (r / width).powi(2)).exp()
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width() > T::zero()) {
            return Err(Error::param("profile_width", "must be positive"));
        }
        if !self.amplitude.is_finite() {
            return Err(Error::param("profile_amplitude", "must be finite"));
        }
        Ok(())
    }

    /// Samples on `grid`, with the signed distance to the centre folded into `[-L/2, L/2)`.
    pub fn sample(&self, grid: &Arc<Grid1D<T>>) -> Field1D<T> {
        let length = grid.length();
        let center = self.center.unwrap_or(length * T::lit(0.5));
        let half = length * T::lit(0.5);
        Field1D::from_fn(grid.clone(), |x| {
            let mut r = x - center;
            if r >= half {
                r -= length;
            } else if r < -half {
                r += length;
            }
            self.amplitude * self.shape(r, length)
        })
    }

    /// Fraction of `∫|f|` lying farther than `L/4` from the centre.
    pub fn tail_fraction(&self, grid: &Arc<Grid1D<T>>) -> T {
        let f = self.sample(grid);
        let length = grid.length();
        let center = self.center.unwrap_or(length * T::lit(0.5));
        let quarter = length * T::lit(0.25);
        let (mut tail, mut total) = (T::zero(), T::zero());
        for (x, v) in grid.coords().into_iter().zip(f.values()) {
            let mut r = (x - center).abs();
            if r > length * T::lit(0.5) {
                r = length - r;
            }
            total += v.abs();
            if r > quarter {
                tail += v.abs();
            }
        }
        if total == T::zero() {
            T::zero()
        } else {
            tail / total
        }
    }

    /// Whether `∫ f` vanishes by symmetry.
    pub fn is_mean_free(&self) -> bool {
        matches!(self.kind, ProfileKind::DerivativeGaussian { .. })
    }
}

impl fmt::Display for ProfileKind<f64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileKind::Gaussian { .. } => f.write_str("gaussian"),
            ProfileKind::DerivativeGaussian { .. } => f.write_str("derivative-gaussian"),
            ProfileKind::PeriodicBump { .. } => f.write_str("periodic-bump"),
            ProfileKind::CosinePacket { .. } => f.write_str("cosine-packet"),
        }
    }
}

/// Profile family name as written in config files, before a width is attached.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfileName {
    Gaussian,
    DerivativeGaussian,
    PeriodicBump,
    CosinePacket,
}

impl FromStr for ProfileName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "gaussian" => Ok(Self::Gaussian),
            "derivative-gaussian" => Ok(Self::DerivativeGaussian),
            "periodic-bump" => Ok(Self::PeriodicBump),
            "cosine-packet" => Ok(Self::CosinePacket),
            other => Err(Error::param(
                "profile",
                format!("unknown profile `{other}`"),
            )),
        }
    }
}

impl ProfileName {
    pub fn with_width<T: Real>(self, width: T, wavenumber: T) -> ProfileKind<T> {
        match self {
            Self::Gaussian => ProfileKind::Gaussian { width },
            Self::DerivativeGaussian => ProfileKind::DerivativeGaussian { width },
            Self::PeriodicBump => ProfileKind::PeriodicBump { width },
            Self::CosinePacket => ProfileKind::CosinePacket { wavenumber, width },
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Gaussian => "gaussian",
            Self::DerivativeGaussian => "derivative-gaussian",
            Self::PeriodicBump => "periodic-bump",
            Self::CosinePacket => "cosine-packet",
        }
    }
}

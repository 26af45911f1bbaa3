//! Scalar abstraction shared by the polynomial and moment evaluators.
//!
//! Everything that only needs ring operations and division (the moment
//! polynomials, the `R` quotients, exact integration of step functions) is
//! written against [`Scalar`], so it runs on `f32`, `f64` and on exact
//! rationals. Quantities that need fractional powers (`Δ`, the optimizer
//! objectives) additionally require [`RealScalar`].

use std::fmt::Debug;
use std::sync::LazyLock;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{Float, FloatConst, Num, ToPrimitive};

use crate::combinatorics::{stirling_table, MomentCoefficients};

pub trait Scalar: Clone + PartialOrd + Debug + Num + Send + Sync + 'static {
    fn of_u64(n: u64) -> Self;
    fn of_biguint(n: &BigUint) -> Self;
    /// Exact for rationals (every finite double is dyadic); rounding for `f32`.
    fn of_f64(x: f64) -> Self;
    fn as_f64(&self) -> f64;
    fn finite(&self) -> bool;
    /// Moment-polynomial coefficients converted once into this scalar type.
    fn moment_coefficients() -> &'static MomentCoefficients<Self>;
}

pub trait RealScalar: Scalar + Float + FloatConst {}

macro_rules! impl_float_scalar {
    ($t:ty, $table:ident) => {
        static $table: LazyLock<MomentCoefficients<$t>> =
            LazyLock::new(|| MomentCoefficients::from_table(stirling_table()));

        impl Scalar for $t {
            fn of_u64(n: u64) -> Self {
                n as $t
            }
            fn of_biguint(n: &BigUint) -> Self {
                // to_f32/to_f64 saturate to infinity on overflow
                n.to_f64().map(|v| v as $t).unwrap_or(<$t>::INFINITY)
            }
            fn of_f64(x: f64) -> Self {
                x as $t
            }
            fn as_f64(&self) -> f64 {
                *self as f64
            }
            fn finite(&self) -> bool {
                self.is_finite()
            }
            fn moment_coefficients() -> &'static MomentCoefficients<Self> {
                &$table
            }
        }

        impl RealScalar for $t {}
    };
}

impl_float_scalar!(f32, F32_COEFFICIENTS);
impl_float_scalar!(f64, F64_COEFFICIENTS);

static RATIONAL_COEFFICIENTS: LazyLock<MomentCoefficients<BigRational>> =
    LazyLock::new(|| MomentCoefficients::from_table(stirling_table()));

impl Scalar for BigRational {
    fn of_u64(n: u64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn of_biguint(n: &BigUint) -> Self {
        BigRational::from_integer(n.clone().into())
    }
    fn of_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite input")
    }
    fn as_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
    fn finite(&self) -> bool {
        true
    }
    fn moment_coefficients() -> &'static MomentCoefficients<Self> {
        &RATIONAL_COEFFICIENTS
    }
}

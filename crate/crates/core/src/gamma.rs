//! Rational part of the doubled unit interval.
//!
//! Every rational `q` in `(0,1]` appears twice, as an approached value `q^-`
//! and an achieved value `q^o`, with `q^-` covered by `q^o`. Zero only
//! appears achieved. The chain carries two partial subtractions (`mip`, and
//! its dual `miss`), a partial addition left adjoint to `mip`, and the
//! flavor-collapsing retraction onto `[0,1]` with its section.
//!
//! Irrational points are not represented; the irrational branches of the
//! subtraction table are unreachable on rational carriers.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("{op} is undefined at ({x}, {y})")]
    Domain {
        op: &'static str,
        x: String,
        y: String,
    },
    #[error("{0} lies outside [0,1]")]
    OutOfRange(String),
    #[error("0^- is not an element")]
    MinusZero,
    #[error("cannot parse `{0}`")]
    Parse(String),
    #[error("meet of an empty family")]
    EmptyMeet,
    #[error("grid I_{from} does not refine I_{to}")]
    GridMismatch { from: u64, to: u64 },
    #[error("{value} is not an element of I_{den}")]
    NotOnGrid { value: GammaValue, den: u64 },
    #[error("grid denominator must be positive")]
    ZeroGrid,
}

/// A reduced rational in `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitRational(BigRational);

impl UnitRational {
    pub fn new(num: u64, den: u64) -> Result<Self, GammaError> {
        if den == 0 {
            return Err(GammaError::OutOfRange(format!("{num}/0")));
        }
        Self::from_ratio(BigRational::new(num.into(), den.into()))
    }

    pub fn from_ratio(r: BigRational) -> Result<Self, GammaError> {
        if r.is_negative() || r > BigRational::one() {
            return Err(GammaError::OutOfRange(r.to_string()));
        }
        Ok(Self(r))
    }

    /// `count / total`, for `count <= total`.
    pub fn from_counts(count: &BigInt, total: &BigInt) -> Result<Self, GammaError> {
        if total.is_zero() {
            return Err(GammaError::OutOfRange(format!("{count}/0")));
        }
        Self::from_ratio(BigRational::new(count.clone(), total.clone()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn into_ratio(self) -> BigRational {
        self.0
    }

    /// `self - other` when `other <= self`.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        (other <= self).then(|| Self(&self.0 - &other.0))
    }

    /// `self + other` when the sum stays at most 1.
    pub fn checked_add(&self, other: &Self) -> Option<Self> {
        let s = &self.0 + &other.0;
        (s <= BigRational::one()).then_some(Self(s))
    }

    /// Denominator as a machine integer, when it fits.
    pub fn denom_u64(&self) -> Option<u64> {
        self.0.denom().to_u64()
    }

    /// Approximation for display in diagnostics only.
    pub fn approx(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for UnitRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for UnitRational {
    type Err = GammaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || GammaError::Parse(s.to_string());
        let r = match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(t.parse().map_err(|_| bad())?),
        };
        Self::from_ratio(r)
    }
}

/// Minus sorts below circ, so the derived order on `GammaValue` is the chain order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flavor {
    Minus,
    Circ,
}

/// A point of the doubled interval: `r^-` (r > 0) or `q^o`.
///
/// Field order matters: the derived `Ord` compares the rational first and
/// breaks ties with the flavor, which is exactly the cover relation `q^- < q^o`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaValue {
    value: UnitRational,
    flavor: Flavor,
}

impl GammaValue {
    pub fn new(value: UnitRational, flavor: Flavor) -> Result<Self, GammaError> {
        if flavor == Flavor::Minus && value.is_zero() {
            return Err(GammaError::MinusZero);
        }
        Ok(Self { value, flavor })
    }

    pub fn circ(value: UnitRational) -> Self {
        Self {
            value,
            flavor: Flavor::Circ,
        }
    }

    pub fn minus(value: UnitRational) -> Result<Self, GammaError> {
        Self::new(value, Flavor::Minus)
    }

    /// Shorthand for `num/den^o`; panics on out-of-range input.
    pub fn c(num: u64, den: u64) -> Self {
        Self::circ(UnitRational::new(num, den).expect("circ value in [0,1]"))
    }

    /// Shorthand for `num/den^-`; panics on out-of-range input or zero.
    pub fn m(num: u64, den: u64) -> Self {
        Self::minus(UnitRational::new(num, den).expect("minus value in [0,1]"))
            .expect("minus value is positive")
    }

    pub fn bottom() -> Self {
        Self::circ(UnitRational::zero())
    }

    pub fn top() -> Self {
        Self::circ(UnitRational::one())
    }

    pub fn value(&self) -> &UnitRational {
        &self.value
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    pub fn is_circ(&self) -> bool {
        self.flavor == Flavor::Circ
    }

    /// The retraction onto `[0,1]`: drops the flavor.
    pub fn collapse(&self) -> UnitRational {
        self.value.clone()
    }

    fn with(value: UnitRational, flavor: Flavor) -> Self {
        // a zero difference is always reported achieved
        if value.is_zero() {
            Self::bottom()
        } else {
            Self { value, flavor }
        }
    }

    fn domain(op: &'static str, x: &Self, y: &Self) -> GammaError {
        GammaError::Domain {
            op,
            x: x.to_string(),
            y: y.to_string(),
        }
    }

    /// The partial minus, defined when `y <= x`.
    pub fn mip(&self, y: &Self) -> Result<Self, GammaError> {
        if y > self {
            return Err(Self::domain("mip", self, y));
        }
        let d = self.value.checked_sub(&y.value).expect("y <= x");
        let flavor = match (self.flavor, y.flavor) {
            (Flavor::Minus, Flavor::Circ) => Flavor::Minus,
            _ => Flavor::Circ,
        };
        Ok(Self::with(d, flavor))
    }

    /// The dual partial minus `x miss y = join { x mip q^o | y < q^o <= x }`,
    /// in closed form.
    pub fn miss(&self, y: &Self) -> Result<Self, GammaError> {
        if y > self {
            return Err(Self::domain("miss", self, y));
        }
        let d = self.value.checked_sub(&y.value).expect("y <= x");
        let flavor = match (self.flavor, y.flavor) {
            // q = s is admitted and achieves the maximum
            (Flavor::Circ, Flavor::Minus) => Flavor::Circ,
            // the thresholds approach s from above without reaching it
            _ => Flavor::Minus,
        };
        Ok(Self::with(d, flavor))
    }

    /// The partial plus, defined when `x <= 1^o mip y`.
    pub fn plus(&self, y: &Self) -> Result<Self, GammaError> {
        let room = Self::top().mip(y)?;
        if *self > room {
            return Err(Self::domain("plus", self, y));
        }
        let s = self.value.checked_add(&y.value).expect("sum at most 1");
        let flavor = if self.is_circ() && y.is_circ() {
            Flavor::Circ
        } else {
            Flavor::Minus
        };
        Ok(Self::with(s, flavor))
    }
}

/// The section of the retraction: rationals are always achieved.
pub fn iota(r: &UnitRational) -> GammaValue {
    GammaValue::circ(r.clone())
}

/// The retraction: collapses `r^-` and `r^o` onto `r`.
pub fn gamma(x: &GammaValue) -> UnitRational {
    x.collapse()
}

impl fmt::Display for GammaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.flavor {
            Flavor::Minus => "-",
            Flavor::Circ => "o",
        };
        write!(f, "{}^{}", self.value, tag)
    }
}

impl FromStr for GammaValue {
    type Err = GammaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t.rsplit_once('^') {
            Some((v, "o")) => Ok(Self::circ(v.parse()?)),
            Some((v, "-")) => Self::minus(v.parse()?),
            Some(_) => Err(GammaError::Parse(s.to_string())),
            None => Ok(Self::circ(t.parse()?)),
        }
    }
}

/// Subbasic clopens of the chain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BasicClopen {
    /// `{x | p^o <= x}`
    UpCirc(UnitRational),
    /// `{x | x <= q^-}`, q > 0
    DownMinus(UnitRational),
}

impl BasicClopen {
    pub fn up_circ(p: UnitRational) -> Self {
        Self::UpCirc(p)
    }

    pub fn down_minus(q: UnitRational) -> Result<Self, GammaError> {
        if q.is_zero() {
            return Err(GammaError::MinusZero);
        }
        Ok(Self::DownMinus(q))
    }

    pub fn contains(&self, x: &GammaValue) -> bool {
        match self {
            Self::UpCirc(p) => *x >= GammaValue::circ(p.clone()),
            Self::DownMinus(q) => *x <= GammaValue::minus(q.clone()).expect("q > 0"),
        }
    }
}

impl fmt::Display for BasicClopen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::UpCirc(p) => write!(f, "upCirc {p}"),
            Self::DownMinus(q) => write!(f, "downMinus {q}"),
        }
    }
}

/// Membership of `x` in a subbasic clopen.
pub fn in_clopen(x: &GammaValue, c: &BasicClopen) -> bool {
    c.contains(x)
}

/// The finite chain `I_n = {0, 1/n, ..., 1}` of achieved values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    den: u64,
}

impl Grid {
    pub fn new(den: u64) -> Result<Self, GammaError> {
        if den == 0 {
            return Err(GammaError::ZeroGrid);
        }
        Ok(Self { den })
    }

    pub fn denominator(&self) -> u64 {
        self.den
    }

    pub fn point(&self, k: u64) -> UnitRational {
        UnitRational::new(k, self.den).expect("k <= n")
    }

    pub fn points(&self) -> impl Iterator<Item = UnitRational> + '_ {
        (0..=self.den).map(|k| self.point(k))
    }

    /// The `n + 1` achieved grid elements, ascending.
    pub fn elements(&self) -> Vec<GammaValue> {
        self.points().map(GammaValue::circ).collect()
    }

    /// All `2n + 1` flavored grid values `0^o, 1/n^-, 1/n^o, ..., 1^-, 1^o`, ascending.
    pub fn flavored(&self) -> Vec<GammaValue> {
        let mut out = Vec::with_capacity(2 * self.den as usize + 1);
        out.push(GammaValue::bottom());
        for k in 1..=self.den {
            let r = self.point(k);
            out.push(GammaValue::minus(r.clone()).expect("k >= 1"));
            out.push(GammaValue::circ(r));
        }
        out
    }

    pub fn contains(&self, x: &GammaValue) -> bool {
        x.is_circ() && self.index_of(x.value()).is_some()
    }

    /// `k` with `r = k/n`, when `r` lies on the grid.
    pub fn index_of(&self, r: &UnitRational) -> Option<u64> {
        let scaled = r.as_ratio() * BigRational::from_integer(self.den.into());
        scaled.is_integer().then(|| scaled.to_integer().to_u64()).flatten()
    }

    /// The floor map `I_self -> I_target`, `x -> floor(x * n) / n`.
    pub fn project(&self, x: &GammaValue, target: &Grid) -> Result<GammaValue, GammaError> {
        if !self.den.is_multiple_of(target.den) {
            return Err(GammaError::GridMismatch {
                from: self.den,
                to: target.den,
            });
        }
        let k = match (x.is_circ(), self.index_of(x.value())) {
            (true, Some(k)) => k,
            _ => {
                return Err(GammaError::NotOnGrid {
                    value: x.clone(),
                    den: self.den,
                })
            }
        };
        let m = self.den / target.den;
        Ok(GammaValue::circ(target.point(k / m)))
    }
}

/// Supremum in the chain; the empty join is `0^o`.
pub fn finite_join<'a, I>(xs: I) -> GammaValue
where
    I: IntoIterator<Item = &'a GammaValue>,
{
    xs.into_iter()
        .max()
        .cloned()
        .unwrap_or_else(GammaValue::bottom)
}

/// Infimum in the chain; the empty meet is rejected.
pub fn finite_meet<'a, I>(xs: I) -> Result<GammaValue, GammaError>
where
    I: IntoIterator<Item = &'a GammaValue>,
{
    xs.into_iter().min().cloned().ok_or(GammaError::EmptyMeet)
}

/// Total order of the chain.
pub fn compare(x: &GammaValue, y: &GammaValue) -> Ordering {
    x.cmp(y)
}

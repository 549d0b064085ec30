use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{GroupRingElement, RingContext, RingError};

/// Precision of a series: `Some(n)` means terms of degree `>= n` are unknown,
/// `None` means the element is exact.
pub type Precision = Option<i64>;

fn prec_min(a: Precision, b: Precision) -> Precision {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn prec_add(a: Precision, b: Precision) -> Precision {
    match (a, b) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    }
}

/// A truncated twisted Laurent series `sum_j a_j z^j` with `a_j` in Z[Z^k].
///
/// Multiplication follows `a z = z zeta(a)`, which gives
/// `(a z^i)(b z^j) = a zeta^{-i}(b) z^{i+j}`: moving `z^i` past `b`
/// replaces `b` by `zeta^{-i}(b)`.
///
/// With `precision == None` the element is an exact Laurent polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct NovikovElement {
    ctx: Arc<RingContext>,
    coeffs: BTreeMap<i64, GroupRingElement>,
    precision: Precision,
}

/// Exact elements of the group ring of `pi x_zeta Z`.
pub type LaurentPolynomial = NovikovElement;

/// Certificate returned by [`NovikovElement::is_unit`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitWitness {
    pub sign: i64,
    pub exponent: Vec<i64>,
    pub order: i64,
}

impl NovikovElement {
    pub fn zero(ctx: &Arc<RingContext>, precision: Precision) -> Self {
        NovikovElement { ctx: ctx.clone(), coeffs: BTreeMap::new(), precision }
    }

    pub fn one(ctx: &Arc<RingContext>, precision: Precision) -> Self {
        Self::from_int(ctx, 1, precision)
    }

    pub fn from_int(ctx: &Arc<RingContext>, c: i64, precision: Precision) -> Self {
        Self::term(ctx, GroupRingElement::from_int(ctx, c), 0, precision)
    }

    /// `c z^degree`.
    pub fn term(
        ctx: &Arc<RingContext>,
        c: GroupRingElement,
        degree: i64,
        precision: Precision,
    ) -> Self {
        let mut out = Self::zero(ctx, precision);
        out.add_coeff(degree, c);
        out
    }

    /// Exact polynomial in z with integer coefficients, lowest degree first.
    pub fn from_ints(ctx: &Arc<RingContext>, low_degree: i64, coeffs: &[i64], precision: Precision) -> Self {
        let mut out = Self::zero(ctx, precision);
        for (i, c) in coeffs.iter().enumerate() {
            out.add_coeff(low_degree + i as i64, GroupRingElement::from_int(ctx, *c));
        }
        out
    }

    pub fn from_coeffs(
        ctx: &Arc<RingContext>,
        coeffs: impl IntoIterator<Item = (i64, GroupRingElement)>,
        precision: Precision,
    ) -> Self {
        let mut out = Self::zero(ctx, precision);
        for (j, c) in coeffs {
            out.add_coeff(j, c);
        }
        out
    }

    fn add_coeff(&mut self, degree: i64, c: GroupRingElement) {
        if let Some(p) = self.precision {
            if degree >= p {
                return;
            }
        }
        let sum = match self.coeffs.remove(&degree) {
            Some(existing) => existing.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.coeffs.insert(degree, sum);
        }
    }

    pub fn context(&self) -> &Arc<RingContext> {
        &self.ctx
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i64, &GroupRingElement)> {
        self.coeffs.iter().map(|(j, c)| (*j, c))
    }

    pub fn coeff(&self, degree: i64) -> GroupRingElement {
        self.coeffs
            .get(&degree)
            .cloned()
            .unwrap_or_else(|| GroupRingElement::zero(&self.ctx))
    }

    /// No known nonzero coefficient (zero modulo `z^precision`).
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// Lower bound for the z-adic valuation: the order, or the precision when
    /// nothing is known.
    fn valuation(&self) -> Precision {
        self.order().or(self.precision)
    }

    fn check_ctx(&self, other: &Self) -> Result<(), RingError> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx == other.ctx {
            Ok(())
        } else {
            Err(RingError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ctx(other)?;
        let mut out = Self::zero(&self.ctx, prec_min(self.precision, other.precision));
        for (j, c) in self.coeffs.iter().chain(other.coeffs.iter()) {
            out.add_coeff(*j, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        NovikovElement {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|(j, c)| (*j, c.neg())).collect(),
            precision: self.precision,
        }
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.try_add(&other.neg())
    }

    /// Twisted product. The result is reported only to the precision both
    /// factors certify: `min(prec(a) + val(b), prec(b) + val(a))`.
    pub fn try_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ctx(other)?;
        let precision = prec_min(
            prec_add(self.precision, other.valuation()),
            prec_add(other.precision, self.valuation()),
        );
        let mut out = Self::zero(&self.ctx, precision);
        for (i, a) in &self.coeffs {
            for (j, b) in &other.coeffs {
                let deg = i + j;
                if let Some(p) = precision {
                    if deg >= p {
                        continue;
                    }
                }
                out.add_coeff(deg, a.mul(&b.twist(-i)));
            }
        }
        Ok(out)
    }

    /// Multiplies by `z^k` on the left.
    pub fn shift(&self, k: i64) -> Self {
        // z^k a = zeta^{-k}(a) z^k
        NovikovElement {
            ctx: self.ctx.clone(),
            coeffs: self.coeffs.iter().map(|(j, c)| (j + k, c.twist(-k))).collect(),
            precision: self.precision.map(|p| p + k),
        }
    }

    /// Forgets everything of degree `>= n`.
    pub fn truncate(&self, n: i64) -> Self {
        let precision = prec_min(self.precision, Some(n));
        NovikovElement {
            ctx: self.ctx.clone(),
            coeffs: self
                .coeffs
                .iter()
                .filter(|(j, _)| **j < n)
                .map(|(j, c)| (*j, c.clone()))
                .collect(),
            precision,
        }
    }

    /// Caps the precision at `precision` (`None` leaves the element as is).
    pub fn with_precision(&self, precision: Precision) -> Self {
        match precision {
            Some(n) => self.truncate(n),
            None => self.clone(),
        }
    }

    /// True iff `self - other` vanishes modulo `z^n`.
    pub fn congruent(&self, other: &Self, n: i64) -> bool {
        let diff = match self.try_sub(other) {
            Ok(d) => d,
            Err(_) => return false,
        };
        diff.coeffs.keys().all(|j| *j >= n)
            && diff.precision.is_none_or(|p| p >= n)
    }

    /// Augmentation `z -> 0` on the nonnegative-degree subring.
    pub fn augment(&self) -> Result<GroupRingElement, RingError> {
        if self.order().is_some_and(|o| o < 0) {
            return Err(RingError::NegativeDegreePresent);
        }
        if self.precision.is_some_and(|p| p <= 0) {
            return Err(RingError::InsufficientPrecision);
        }
        Ok(self.coeff(0))
    }

    /// Units are exactly the elements whose lowest coefficient is `+-x^v`.
    pub fn is_unit(&self) -> Result<Option<UnitWitness>, RingError> {
        let order = self.order().ok_or(RingError::ZeroElement)?;
        Ok(self.coeffs[&order]
            .as_signed_monomial()
            .map(|(sign, v)| UnitWitness { sign, exponent: v.clone(), order }))
    }

    /// Inverse modulo `z^n`: `self * result == 1 (mod z^n)`.
    ///
    /// With `a = sum_{i >= m} a_i z^i`, the coefficients of `r` are solved
    /// degree by degree from `a_m zeta^{-m}(r_j) = delta_{j+m,0} - sum_{i>m}
    /// a_i zeta^{-i}(r_{j+m-i})`. The result carries precision `n - m`, capped
    /// by what the precision of `self` certifies.
    pub fn invert_unit(&self, n: i64) -> Result<Self, RingError> {
        let witness = self.is_unit()?.ok_or(RingError::NotUnit)?;
        let m = witness.order;
        let n_eff = match self.precision {
            Some(p) => n.min(p - m),
            None => n,
        };
        let result_precision = n_eff - m;
        let lead_inv = self.coeffs[&m].unit_inverse()?;
        let mut r: BTreeMap<i64, GroupRingElement> = BTreeMap::new();
        for j in -m..result_precision {
            let k = j + m;
            let mut rhs = if k == 0 {
                GroupRingElement::one(&self.ctx)
            } else {
                GroupRingElement::zero(&self.ctx)
            };
            for (i, a) in self.coeffs.range(m + 1..) {
                let idx = k - i;
                if idx < -m {
                    break;
                }
                if let Some(rv) = r.get(&idx) {
                    rhs = rhs.sub(&a.mul(&rv.twist(-i)));
                }
            }
            // a_m zeta^{-m}(r_j) = rhs  =>  r_j = zeta^m(a_m^{-1} rhs)
            let rj = lead_inv.mul(&rhs).twist(m);
            if !rj.is_zero() {
                r.insert(j, rj);
            }
        }
        Ok(NovikovElement { ctx: self.ctx.clone(), coeffs: r, precision: Some(result_precision) })
    }

    pub fn parse(ctx: &Arc<RingContext>, s: &str) -> Result<Self, RingError> {
        super::text::parse_series(ctx, s)
    }
}

impl fmt::Display for NovikovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in &self.coeffs {
            for (v, a) in c.terms() {
                parts.push(format!("{}*z^{j}", GroupRingElement::fmt_term(&self.ctx, v, a)));
            }
        }
        if let Some(p) = self.precision {
            parts.push(format!("O(z^{p})"));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for NovikovElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

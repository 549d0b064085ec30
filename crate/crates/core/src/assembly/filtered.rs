use crate::matrix::{Matrix, NovikovContext};
use crate::rings::NovikovElement;

use super::AssemblyError;

/// A square matrix `Theta` over nonnegative z-degrees on an ordered label
/// set, such that `Theta(x) - x` lies in `z R' + R'{y < x}`: the
/// augmentation is upper triangular with unit diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredEndomorphism {
    pub labels: Vec<String>,
    pub theta: Matrix<NovikovElement>,
}

/// The factorization `Theta = (1 + Psi) e(Theta)` certifying that `Theta`
/// is invertible over `R'`: `e(Theta)^{-1}` by back-substitution and `Psi`
/// with all entries in `z R'`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimpleWitness {
    pub augmentation_inverse: Matrix<NovikovElement>,
    pub psi: Matrix<NovikovElement>,
}

impl FilteredEndomorphism {
    pub fn new(labels: Vec<String>, theta: Matrix<NovikovElement>) -> Result<Self, AssemblyError> {
        let n = labels.len();
        if theta.rows() != n || theta.cols() != n {
            return Err(AssemblyError::ShapeMismatch(format!("{n} labels for a {:?} matrix", theta.shape())));
        }
        for r in 0..n {
            for c in 0..n {
                let e = theta.get(r, c);
                if e.order().is_some_and(|o| o < 0) {
                    return Err(AssemblyError::NegativeDegreePresent);
                }
                let a = e.augment().map_err(|_| {
                    AssemblyError::NotFilteredShape(format!("entry ({}, {}) has no known constant term", labels[r], labels[c]))
                })?;
                if r > c && !a.is_zero() {
                    return Err(AssemblyError::NotFilteredShape(format!(
                        "augmentation has {a} below the diagonal at ({}, {})",
                        labels[r], labels[c]
                    )));
                }
                if r == c && a.as_signed_monomial().is_none() {
                    return Err(AssemblyError::NotFilteredShape(format!(
                        "diagonal augmentation {a} at {} is not a signed monomial",
                        labels[r]
                    )));
                }
            }
        }
        Ok(FilteredEndomorphism { labels, theta })
    }

    fn size(&self) -> usize {
        self.labels.len()
    }

    /// `e(Theta)` as an exact matrix of z-degree 0.
    pub fn augmentation(&self) -> Matrix<NovikovElement> {
        let ring = self.theta.context().ring.clone();
        let ctx = NovikovContext::new(ring.clone(), None);
        Matrix::from_fn(&ctx, self.size(), self.size(), |r, c| {
            let a = self.theta.get(r, c).augment().expect("checked on construction");
            NovikovElement::term(&ring, a, 0, None)
        })
    }

    /// Factorization witness at precision `n`.
    pub fn witness(&self, n: i64) -> Result<SimpleWitness, AssemblyError> {
        let e = self.augmentation();
        let size = self.size();
        let ctx = e.context().clone();
        // back-substitution for the upper triangular e X = 1
        let mut inv = Matrix::zeros(&ctx, size, size);
        for j in 0..size {
            for i in (0..=j).rev() {
                let mut acc = if i == j { NovikovElement::one(&ctx.ring, None) } else { NovikovElement::zero(&ctx.ring, None) };
                for k in i + 1..=j {
                    acc = acc.try_sub(&e.get(i, k).try_mul(inv.get(k, j))?)?;
                }
                let diag = NovikovElement::term(&ctx.ring, e.get(i, i).coeff(0).unit_inverse()?, 0, None);
                inv.set(i, j, diag.try_mul(&acc)?);
            }
        }
        let nctx = NovikovContext::new(ctx.ring.clone(), Some(n));
        let theta = self.theta.with_precision(Some(n));
        let psi = theta.mul(&inv.with_precision(Some(n))).sub(&Matrix::identity(&nctx, size));
        Ok(SimpleWitness { augmentation_inverse: inv, psi })
    }
}

/// `Theta^{-1}` modulo `z^n`: `e(Theta)^{-1} (1 + sum_{j >= 1} (-Psi)^j)`.
pub fn invert_filtered(t: &FilteredEndomorphism, n: i64) -> Result<FilteredEndomorphism, AssemblyError> {
    let w = t.witness(n)?;
    let ctx = NovikovContext::new(t.theta.context().ring.clone(), Some(n));
    let size = t.size();
    let minus_psi = w.psi.neg().truncate(n);
    let mut sum = Matrix::identity(&ctx, size);
    let mut power = Matrix::identity(&ctx, size);
    for _ in 1..n.max(1) {
        power = power.mul(&minus_psi).truncate(n);
        if power.is_zero() {
            break;
        }
        sum = sum.add(&power);
    }
    let inverse = w.augmentation_inverse.with_precision(Some(n)).mul(&sum).truncate(n);
    Ok(FilteredEndomorphism { labels: t.labels.clone(), theta: inverse })
}

//! Random complexes and maps shared by unit tests.

use std::sync::Arc;

use proptest::prelude::*;

use crate::chain::{ChainComplex, ChainMap, GradedBasis, Label, MapRelation};
use crate::matrix::{Coefficient, Matrix};
use crate::rings::{GroupRingElement, NovikovElement, RingContext};

pub(crate) fn basis(dims: &[(i32, usize)]) -> GradedBasis {
    GradedBasis::new(
        dims.iter()
            .flat_map(|&(d, n)| (0..n).map(move |k| Label::new(format!("e{d}_{k}"), d))),
    )
    .unwrap()
}

// Random complexes: an elementary complex (identity blocks) conjugated by
// triangular changes of basis with unit diagonal, so d^2 = 0 holds exactly
// in any ring.

pub(crate) fn unipotent<R: Coefficient>(ctx: &R::Context, n: usize, entries: &mut impl Iterator<Item = R>) -> Matrix<R> {
    let mut m = Matrix::identity(ctx, n);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, entries.next().unwrap_or_else(|| R::zero(ctx)));
        }
    }
    m
}

pub(crate) fn unipotent_inverse<R: Coefficient>(u: &Matrix<R>) -> Matrix<R> {
    // back substitution on an upper unitriangular matrix
    let n = u.rows();
    let ctx = u.context();
    let mut inv = Matrix::identity(ctx, n);
    for j in 0..n {
        for i in (0..j).rev() {
            let mut acc = R::zero(ctx);
            for k in i + 1..=j {
                acc = acc.add(&u.get(i, k).mul(inv.get(k, j)));
            }
            inv.set(i, j, acc.neg());
        }
    }
    inv
}

/// Degrees 0..=2 with elementary pieces `cancel[i]` pairs between degrees
/// `i+1` and `i` plus `free[i]` generators with zero differential.
pub(crate) fn random_complex<R: Coefficient>(
    ctx: &R::Context,
    cancel: [usize; 2],
    free: [usize; 3],
    entries: &mut impl Iterator<Item = R>,
) -> ChainComplex<R> {
    let dims = [cancel[0] + free[0], cancel[0] + cancel[1] + free[1], cancel[1] + free[2]];
    let b = basis(&[(0, dims[0]), (1, dims[1]), (2, dims[2])]);
    let elementary = |i: usize| {
        let (rows, cols) = (dims[i - 1], dims[i]);
        let mut m = Matrix::zeros(ctx, rows, cols);
        // in degree 1 the first cancel[0] generators pair down, the next
        // cancel[1] are hit from degree 2
        let tgt_start = if i == 1 { 0 } else { cancel[0] };
        for k in 0..cancel[i - 1] {
            m.set(tgt_start + k, k, R::one(ctx));
        }
        m
    };
    let us: Vec<Matrix<R>> = dims.iter().map(|&n| unipotent(ctx, n, entries)).collect();
    let diffs = (1..3)
        .map(|i| {
            let d = us[i - 1].mul(&elementary(i)).mul(&unipotent_inverse(&us[i]));
            (i as i32, d)
        })
        .collect::<Vec<_>>();
    ChainComplex::new(ctx, b, diffs).unwrap()
}

pub(crate) fn random_matrix<R: Coefficient>(ctx: &R::Context, rows: usize, cols: usize, entries: &mut impl Iterator<Item = R>) -> Matrix<R> {
    Matrix::from_fn(ctx, rows, cols, |_, _| entries.next().unwrap_or_else(|| R::zero(ctx)))
}

/// `d h + s h d` for random `h`: a chain map for `s = 1` (commuting) and
/// an anticommuting one for `s = -1`.
pub(crate) fn null_map<R: Coefficient>(
    src: &ChainComplex<R>,
    tgt: &ChainComplex<R>,
    relation: MapRelation,
    entries: &mut impl Iterator<Item = R>,
) -> (ChainMap<R>, Vec<(i32, Matrix<R>)>) {
    let ctx = src.context();
    let h: Vec<(i32, Matrix<R>)> = (-1..=2).map(|i| (i, random_matrix(ctx, tgt.dim(i + 1), src.dim(i), entries))).collect();
    let at = |i: i32| h.iter().find(|(d, _)| *d == i).map(|(_, m)| m.clone()).unwrap();
    let s = R::from_int(ctx, -relation.sign());
    let mats = src
        .degrees()
        .map(|i| (i, tgt.d(i + 1).mul(&at(i)).add(&at(i - 1).mul(&src.d(i)).scale(&s))))
        .collect::<Vec<_>>();
    (ChainMap::new(src.clone(), tgt.clone(), 0, relation, mats).unwrap(), h)
}

pub(crate) fn laurent_ring() -> impl Strategy<Value = Arc<RingContext>> {
    prop_oneof![
        Just(RingContext::integers()),
        Just(RingContext::untwisted(1)),
        Just(RingContext::twisted(1, vec![vec![-1]]).unwrap()),
        Just(RingContext::twisted(2, vec![vec![0, 1], vec![1, 0]]).unwrap()),
    ]
}

pub(crate) fn laurent_entries(ring: Arc<RingContext>, seeds: Vec<(i64, i64, i64, i64)>, precision: Option<i64>) -> Vec<NovikovElement> {
    seeds
        .into_iter()
        .map(|(c, e, z, keep)| {
            if keep % 3 == 0 {
                return NovikovElement::zero(&ring, precision);
            }
            let exp = vec![e; ring.rank()];
            let g = GroupRingElement::monomial(&ring, c, exp);
            NovikovElement::term(&ring, g, z, precision)
        })
        .collect()
}


type Mats<R> = Vec<(i32, Matrix<R>)>;

/// Maps `theta: F_i -> D_{i-1}`, `theta': D'_i -> F_i`, `psi: D'_i -> D_i`
/// with `d_D theta + theta d_F = 0`, `d_F theta' = theta' d_D'` and
/// `d_D psi - psi d_D' + theta theta' = 0`: `theta = d k - k d`,
/// `theta' = d h + h d`, `psi = -k d h - k h d + (d m + m d)`.
pub(crate) fn triple_maps<R: Coefficient>(
    d: &ChainComplex<R>,
    f: &ChainComplex<R>,
    dp: &ChainComplex<R>,
    entries: &mut impl Iterator<Item = R>,
) -> (Mats<R>, Mats<R>, Mats<R>) {
    let ctx = d.context();
    let degs = -1..=3;
    let h: Mats<R> = degs.clone().map(|i| (i, random_matrix(ctx, f.dim(i + 1), dp.dim(i), entries))).collect();
    let k: Mats<R> = degs.clone().map(|i| (i, random_matrix(ctx, d.dim(i), f.dim(i), entries))).collect();
    let m: Mats<R> = degs.map(|i| (i, random_matrix(ctx, d.dim(i + 1), dp.dim(i), entries))).collect();
    let g = |v: &Mats<R>, i: i32| v.iter().find(|(j, _)| *j == i).map(|(_, x)| x.clone()).unwrap();
    let thetaprime = dp.degrees().map(|i| (i, f.d(i + 1).mul(&g(&h, i)).add(&g(&h, i - 1).mul(&dp.d(i))))).collect();
    let theta = f.degrees().map(|i| (i, d.d(i).mul(&g(&k, i)).sub(&g(&k, i - 1).mul(&f.d(i))))).collect();
    let psi = dp
        .degrees()
        .map(|i| {
            let a = g(&k, i).mul(&f.d(i + 1)).mul(&g(&h, i));
            let b = g(&k, i).mul(&g(&h, i - 1)).mul(&dp.d(i));
            let c = d.d(i + 1).mul(&g(&m, i)).add(&g(&m, i - 1).mul(&dp.d(i)));
            (i, c.sub(&a).sub(&b))
        })
        .collect();
    (theta, thetaprime, psi)
}

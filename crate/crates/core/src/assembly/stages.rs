use crate::chain::ChainComplex;
use crate::matrix::NovikovContext;
use crate::rings::NovikovElement;

use super::AssemblyError;

fn has_negative_degree(c: &ChainComplex<NovikovElement>) -> bool {
    c.degrees().any(|i| {
        let d = c.d(i);
        (0..d.rows()).any(|r| (0..d.cols()).any(|k| d.get(r, k).order().is_some_and(|o| o < 0)))
    })
}

/// Stage `l`: coefficients reduced modulo `z^{l+1}`, a complex over the
/// truncated polynomial ring. Stage 0 is the augmentation `z -> 0`.
pub fn finite_stage(c: &ChainComplex<NovikovElement>, l: i64) -> Result<ChainComplex<NovikovElement>, AssemblyError> {
    if l < 0 {
        return Err(AssemblyError::ShapeMismatch(format!("stage {l} is negative")));
    }
    if has_negative_degree(c) {
        return Err(AssemblyError::NegativeDegreePresent);
    }
    let ctx = NovikovContext::new(c.context().ring.clone(), Some(l + 1));
    Ok(c.with_context(ctx, |m| m.with_precision(Some(l + 1))))
}

/// The reduction from stage `l + 1` to stage `l` is the identity on the
/// basis; it commutes with the differentials iff reducing stage `l + 1`'s
/// differential gives stage `l`'s, entry by entry.
pub fn projection_commutes(c: &ChainComplex<NovikovElement>, l: i64) -> Result<bool, AssemblyError> {
    let upper = finite_stage(c, l + 1)?;
    let lower = finite_stage(c, l)?;
    Ok(upper.degrees().all(|i| upper.d(i).with_precision(Some(l + 1)) == lower.d(i))
        && upper.verify_mod(l + 2).is_empty()
        && lower.verify_mod(l + 1).is_empty())
}

//! Textual term lists, e.g. `(-1)*x^[2]*z^3 + (4)*z^5 + O(z^8)`.

use std::sync::Arc;

use super::{GroupRingElement, NovikovElement, RingContext, RingError};

fn parse_err(s: &str) -> RingError {
    RingError::Parse(s.to_string())
}

/// Parses `(c)` or `(c)*x^[a,b,...]`.
pub(crate) fn parse_coefficient_monomial(
    ctx: &Arc<RingContext>,
    s: &str,
) -> Result<(i64, Vec<i64>), RingError> {
    let rest = s.strip_prefix('(').ok_or_else(|| parse_err(s))?;
    let close = rest.find(')').ok_or_else(|| parse_err(s))?;
    let c: i64 = rest[..close].trim().parse().map_err(|_| parse_err(s))?;
    let rest = &rest[close + 1..];
    let v = if rest.is_empty() {
        vec![0; ctx.rank()]
    } else {
        let inner = rest
            .strip_prefix("*x^[")
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| parse_err(s))?;
        if inner.trim().is_empty() {
            vec![]
        } else {
            inner
                .split(',')
                .map(|e| e.trim().parse::<i64>().map_err(|_| parse_err(s)))
                .collect::<Result<_, _>>()?
        }
    };
    if v.len() != ctx.rank() {
        return Err(RingError::ContextMismatch);
    }
    Ok((c, v))
}

pub(crate) fn parse_series(ctx: &Arc<RingContext>, s: &str) -> Result<NovikovElement, RingError> {
    let s = s.trim();
    let mut precision = None;
    let mut coeffs = Vec::new();
    if s != "0" {
        for piece in s.split(" + ") {
            let piece = piece.trim();
            if let Some(p) = piece.strip_prefix("O(z^").and_then(|r| r.strip_suffix(')')) {
                precision = Some(p.trim().parse::<i64>().map_err(|_| parse_err(piece))?);
                continue;
            }
            // a missing `*z^j` factor means degree 0
            let (head, degree) = match piece.rfind("*z^") {
                Some(star) => {
                    let degree: i64 = piece[star + 3..].trim().parse().map_err(|_| parse_err(piece))?;
                    (&piece[..star], degree)
                }
                None => (piece, 0),
            };
            let (c, v) = parse_coefficient_monomial(ctx, head)?;
            coeffs.push((degree, GroupRingElement::monomial(ctx, c, v)));
        }
    }
    Ok(NovikovElement::from_coeffs(ctx, coeffs, precision))
}

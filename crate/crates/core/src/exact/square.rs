use num_traits::Signed;

use super::{AlgebraError, Monomial, MultiPoly};

/// Square root of a polynomial, if it is a square over its tower.
///
/// Terms of the root are peeled off from the top in graded-lex order. The
/// returned root is normalized so that the first nonzero rational in its
/// leading coefficient is positive.
pub fn is_square(p: &MultiPoly) -> Result<Option<MultiPoly>, AlgebraError> {
    let Some((lm, lc)) = p.leading_term() else {
        return Ok(Some(p.clone()));
    };
    if lm.0.iter().any(|e| e % 2 == 1) {
        return Ok(None);
    }
    let Some(root_c) = lc.sqrt()? else {
        return Ok(None);
    };
    let half: Vec<u32> = lm.0.iter().map(|e| e / 2).collect();
    let lead = Monomial(half.clone());
    let mut q = p.monomial_like(&half, &root_c);
    let two_lead_inv = (&root_c + &root_c).inv()?;
    let mut r = p - &(&q * &q);
    let mut last = lead.clone();
    while let Some((m, c)) = r.leading_term() {
        // the next root term is lt(r) / (2 lt(q))
        if !lead.divides(&m) {
            return Ok(None);
        }
        let e: Vec<u32> = m.0.iter().zip(&lead.0).map(|(a, b)| a - b).collect();
        let em = Monomial(e.clone());
        if em >= last {
            return Ok(None);
        }
        last = em;
        let t = p.monomial_like(&e, &(&c * &two_lead_inv));
        r = &(&r - &(&(&q + &q) * &t)) - &(&t * &t);
        q = &q + &t;
    }
    let neg = q
        .leading_term()
        .and_then(|(_, c)| c.leading_rational())
        .is_some_and(|x| x.is_negative());
    Ok(Some(if neg { -q } else { q }))
}

//! Coefficient extraction with respect to a set of key atoms.

use std::collections::BTreeMap;

use super::{normalize, Atom, CanonicalForm, Expr, Kernel, Monomial, Poly};
use crate::{Error, Result};

/// Exponents of the key atoms, in the order the keys were given.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MonomialKey(pub Vec<u32>);

impl MonomialKey {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// The key monomial as an expression.
    pub fn to_expr(&self, keys: &[Atom]) -> Expr {
        Expr::product(
            keys.iter()
                .zip(&self.0)
                .map(|(a, &e)| Expr::atom(a).pow(e as i64)),
        )
    }
}

impl std::fmt::Display for MonomialKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

/// Split `e` as a polynomial in `keys`. Coefficients are free of the keys and
/// zero coefficients are omitted.
pub fn collect(e: &Expr, keys: &[Atom]) -> Result<BTreeMap<MonomialKey, Expr>> {
    let form = normalize(e)?;
    let is_key = |a: &Atom| keys.contains(a);
    let offending = |m: &Monomial| {
        m.factors()
            .iter()
            .find_map(|(k, _)| k.argument_mentions(&is_key).then(|| k.clone()))
    };
    let key_name = |k: &Kernel| {
        keys.iter()
            .find(|a| k.argument_mentions(&|b: &Atom| b == *a))
            .map_or_else(|| k.to_expr().to_string(), |a| a.to_string())
    };
    for (m, _) in form.denominator().terms() {
        if let Some(k) = offending(m) {
            return Err(Error::NotPolynomial(key_name(&k)));
        }
        if let Some((k, _)) = m
            .factors()
            .iter()
            .find(|(k, _)| k.as_atom().is_some_and(is_key))
        {
            return Err(Error::NotPolynomial(k.to_expr().to_string()));
        }
    }
    let mut groups: BTreeMap<MonomialKey, Poly> = BTreeMap::new();
    for (m, q) in form.numerator().terms() {
        if let Some(k) = offending(m) {
            return Err(Error::NotPolynomial(key_name(&k)));
        }
        let (key_part, rest) = m.split(|k| k.as_atom().is_some_and(is_key));
        let exps = MonomialKey(
            keys.iter()
                .map(|a| key_part.degree_in(&Kernel::Atom(a.clone())))
                .collect(),
        );
        groups.entry(exps).or_default().add_term(rest, q.clone());
    }
    let den = CanonicalForm::from_poly(form.denominator().clone())
        .inv()
        .expect("canonical denominators are nonzero");
    Ok(groups
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .map(|(k, p)| (k, CanonicalForm::from_poly(p).mul(&den).to_expr()))
        .collect())
}

//! Tensor products of CDGAs.
//!
//! `(A ⊗ ΛV) ⊗ (B ⊗ ΛW)` is presented as `(A ⊗ B) ⊗ Λ(V ⊕ W)` via
//! `(a ⊗ v) ⊗ (b ⊗ w) ↦ (-1)^{|v||b|} (a ⊗ b) ⊗ vw`. Generators of the
//! right factor whose names clash with anything on the left get primes
//! appended; the renaming is returned.

use alloc::string::String;
use alloc::vec::Vec;

use crate::cdga::{Cdga, CdgaElement, Term};
use crate::error::AlgebraError;
use crate::gca::{Generator, GeneratorSet};

#[derive(Debug, Clone, PartialEq)]
pub struct TensorProduct {
    pub cdga: Cdga,
    /// `(old, new)` for every renamed generator of the right factor.
    pub renaming: Vec<(String, String)>,
    left_gens: usize,
    right_base_dim: usize,
}

impl TensorProduct {
    /// Image `e ⊗ 1` of an element of the left factor.
    pub fn left(&self, e: &CdgaElement) -> CdgaElement {
        embed_left(e, self.right_base_dim, self.cdga.generators().len())
    }

    /// Image `1 ⊗ e` of an element of the right factor.
    pub fn right(&self, e: &CdgaElement) -> CdgaElement {
        embed_right(e, self.left_gens, self.cdga.generators().len())
    }
}

fn embed_left(e: &CdgaElement, right_base_dim: usize, total: usize) -> CdgaElement {
    CdgaElement::from_terms(e.terms().iter().map(|(t, c)| {
        (Term { base: t.base * right_base_dim, monomial: t.monomial.embed(0, total) }, c.clone())
    }))
}

fn embed_right(e: &CdgaElement, left_gens: usize, total: usize) -> CdgaElement {
    CdgaElement::from_terms(
        e.terms().iter().map(|(t, c)| (Term { base: t.base, monomial: t.monomial.embed(left_gens, total) }, c.clone())),
    )
}

pub fn tensor(a: &Cdga, b: &Cdga) -> Result<TensorProduct, AlgebraError> {
    let base = a.base().tensor(b.base());
    let mut taken: Vec<String> = base.names().to_vec();
    taken.extend(a.generators().generators().iter().map(|g| g.name.clone()));
    let mut gens: Vec<Generator> = a.generators().generators().to_vec();
    let mut renaming = Vec::new();
    for g in b.generators().generators() {
        let mut name = g.name.clone();
        while taken.contains(&name) {
            name.push('\'');
        }
        if name != g.name {
            renaming.push((g.name.clone(), name.clone()));
        }
        taken.push(name.clone());
        gens.push(Generator::new(name, g.degree));
    }
    let ctx = GeneratorSet::new(gens)?;
    let (nv, nb, total) = (a.generators().len(), b.base().dim(), ctx.len());
    let differential = a
        .differential()
        .iter()
        .map(|d| embed_left(d, nb, total))
        .chain(b.differential().iter().map(|d| embed_right(d, nv, total)))
        .collect();
    let label = alloc::format!("{} ⊗ {}", a.label(), b.label());
    let cdga = Cdga::new(label, base, ctx, differential)?;
    Ok(TensorProduct { cdga, renaming, left_gens: nv, right_base_dim: nb })
}

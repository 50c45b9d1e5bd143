//! The explicit double cover of an elliptic torus, genuine characters with
//! half-integral weight, the shift from a genuine character to an honest
//! character of the torus, and the square roots of `det(a | u_f)` on twisted
//! lifts.

use crate::exactnum::{rat, Circle, Cx, Rat};
use crate::linalg::*;
use crate::realstructure::PositivitySystem;
use crate::rootdata::{BasedRootDatum, PinnedAutomorphism};
use crate::{Error, Result};
use num_traits::Zero;

/// A point of the double cover of the (possibly disconnected) torus: the
/// torus coordinate `t` with element `exp(2πi·t)`, a deck sign against the
/// fixed ρ-reference, and the index of the outer coset.
#[derive(Clone, Debug)]
pub struct CoverElement {
    pub angle_lift: QVec,
    pub deck: i64,
    pub a_power: usize,
}

impl CoverElement {
    pub fn new(angle_lift: QVec, deck: i64, a_power: usize) -> Self {
        assert!(deck == 1 || deck == -1);
        CoverElement { angle_lift, deck, a_power }
    }

    pub fn base(angle_lift: QVec) -> Self {
        CoverElement::new(angle_lift, 1, 0)
    }

    /// Are two records the same cover point? They must lie over the same
    /// coset, differ by a lattice vector in the angle, and carry deck signs
    /// related by `e^{2πi⟨ρ, t−t'⟩}` (a sign, since 2ρ is integral).
    pub fn same_point(&self, other: &CoverElement, datum: &BasedRootDatum) -> bool {
        if self.a_power != other.a_power {
            return false;
        }
        let diff = sub_qvec(&self.angle_lift, &other.angle_lift);
        if diff.iter().any(|x| !x.fract().is_zero()) {
            return false;
        }
        let rho = datum.rho();
        let pairing = dot_qq(&rho, &diff);
        let sign = if (pairing * rat(2, 1)).fract().is_zero() {
            if pairing.fract().is_zero() { 1 } else { -1 }
        } else {
            return false;
        };
        other.deck == self.deck * sign
    }

    /// The other point over the same torus element.
    pub fn deck_flip(&self) -> CoverElement {
        CoverElement::new(self.angle_lift.clone(), -self.deck, self.a_power)
    }
}

/// A genuine character of the double cover: a half-integral weight
/// `λ ∈ ρ + X^*`, together with an optional root-of-unity value on the
/// chosen lift of the outer generator.
#[derive(Clone, Debug)]
pub struct GenuineCharacter {
    pub lambda: QVec,
    pub a_value: Option<Circle>,
}

impl GenuineCharacter {
    pub fn new(datum: &BasedRootDatum, lambda: QVec) -> Result<Self> {
        let rho = datum.rho();
        let diff = sub_qvec(&lambda, &rho);
        if diff.iter().any(|x| !x.fract().is_zero()) {
            return Err(Error::InvalidDatum(
                "weight of a genuine character must lie in ρ + X^*".into(),
            ));
        }
        Ok(GenuineCharacter { lambda, a_value: None })
    }

    pub fn with_extension(mut self, zeta: Circle) -> Self {
        self.a_value = Some(zeta);
        self
    }

    pub fn is_regular(&self, datum: &BasedRootDatum) -> bool {
        datum.roots().iter().all(|r| !dot_qi(&self.lambda, &r.coroot).is_zero())
    }

    /// Positivity chamber of the character: roots with `⟨λ, α^∨⟩ > 0`.
    pub fn positive_roots(&self, datum: &BasedRootDatum) -> Vec<usize> {
        datum
            .roots()
            .iter()
            .enumerate()
            .filter(|(_, r)| dot_qi(&self.lambda, &r.coroot) > Rat::zero())
            .map(|(i, _)| i)
            .collect()
    }
}

/// Value of a genuine character at a cover point:
/// `deck · e^{2πi⟨λ, t⟩} · ζ^{a_power}`. Well defined on cover points because
/// `λ + ρ` is integral.
pub fn evaluate(
    a: &PinnedAutomorphism,
    chi: &GenuineCharacter,
    x: &CoverElement,
) -> Result<Circle> {
    if x.a_power > 0 {
        if a.apply_star_q(&chi.lambda) != chi.lambda {
            return Err(Error::NotFixed(
                "extension exists only for characters with fixed weight".into(),
            ));
        }
        if chi.a_value.is_none() {
            return Err(Error::InvalidDatum(
                "character carries no extension value for the outer coset".into(),
            ));
        }
    }
    let mut v = Circle::new(dot_qq(&chi.lambda, &x.angle_lift));
    if x.deck == -1 {
        v = v * Circle::minus_one();
    }
    if x.a_power > 0 {
        v = v * chi.a_value.unwrap().pow(x.a_power as i64);
    }
    Ok(v)
}

/// The integral weight of the shifted character `τ ⊗ ρ_{f,u_f}` of the torus
/// itself: `λ − ρ_τ`, where `ρ_τ` is the half-sum of the positive roots of
/// the character's own chamber. Requires the compatibility `R_f^+ = R_τ^-`.
pub fn rho_shifted_weight(
    datum: &BasedRootDatum,
    chi: &GenuineCharacter,
    f: &PositivitySystem,
) -> Result<IVec> {
    if !chi.is_regular(datum) {
        return Err(Error::Singular("character weight is singular".into()));
    }
    let chi_pos = chi.positive_roots(datum);
    let opposite: Vec<usize> = datum
        .roots()
        .iter()
        .enumerate()
        .filter(|(i, _)| !chi_pos.contains(i))
        .map(|(i, _)| i)
        .collect();
    if opposite != f.positive_roots {
        return Err(Error::InvalidDatum(
            "positivity system must be opposite to the character chamber".into(),
        ));
    }
    let mut rho_tau = vec![Rat::zero(); datum.dim()];
    for &i in &chi_pos {
        for (s, x) in rho_tau.iter_mut().zip(&datum.roots()[i].vec) {
            *s += Rat::new(*x, 2);
        }
    }
    let shifted = sub_qvec(&chi.lambda, &rho_tau);
    shifted
        .iter()
        .map(|x| {
            if x.fract().is_zero() {
                Ok(x.to_integer())
            } else {
                Err(Error::Inconsistent("shifted weight failed to be integral".into()))
            }
        })
        .collect()
}

/// `det(a | u_f)` as ±1, computed as a product over a-orbits of the positive
/// system: each orbit of size n contributes `(−1)^{n−1}` times the sign by
/// which `a^n` acts on a member's root line.
pub fn det_auto_on_chamber(
    datum: &BasedRootDatum,
    a: &PinnedAutomorphism,
    f: &PositivitySystem,
) -> Result<i64> {
    let orbits = orbits_on(datum, a, &f.positive_roots)?;
    let mut det = 1i64;
    for o in &orbits {
        let b = a.power(o.len());
        let ls = crate::rootdata::line_sign(datum, &b, o[0])?;
        let parity = if o.len() % 2 == 0 { -1 } else { 1 };
        det *= parity * ls;
    }
    Ok(det)
}

/// Orbits of the automorphism on an a-stable set of root indices.
pub fn orbits_on(
    datum: &BasedRootDatum,
    a: &PinnedAutomorphism,
    indices: &[usize],
) -> Result<Vec<Vec<usize>>> {
    let set: std::collections::HashSet<usize> = indices.iter().copied().collect();
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut sorted: Vec<usize> = indices.to_vec();
    sorted.sort_unstable();
    for &start in &sorted {
        if seen.contains(&start) {
            continue;
        }
        let mut orbit = Vec::new();
        let mut i = start;
        loop {
            if !set.contains(&i) {
                return Err(Error::NotFixed("root set is not stable under the automorphism".into()));
            }
            seen.insert(i);
            orbit.push(i);
            let img = a.apply_star(&datum.roots()[i].vec);
            i = datum
                .root_index(&img)
                .ok_or_else(|| Error::NotPinned("automorphism does not permute roots".into()))?;
            if i == start {
                break;
            }
        }
        out.push(orbit);
    }
    Ok(out)
}

/// One of the two square roots of `det(a | u_f)`, on the lift of `1⋊a`
/// selected by `lift_sign`. No canonical branch is chosen; downstream
/// formulas use only branch-independent combinations.
pub fn rho_fu_twisted(
    datum: &BasedRootDatum,
    a: &PinnedAutomorphism,
    f: &PositivitySystem,
    lift_sign: i64,
) -> Result<Cx> {
    let stable = f.positive_roots.iter().all(|&i| {
        let img = a.apply_star(&datum.roots()[i].vec);
        datum.root_index(&img).map_or(false, |j| f.contains(j))
    });
    if !stable {
        return Err(Error::NotFixed("chamber is not stable under the automorphism".into()));
    }
    let det = det_auto_on_chamber(datum, a, f)?;
    let principal = if det == 1 { Cx::one() } else { Cx::i() };
    Ok(if lift_sign >= 0 { principal } else { -principal })
}

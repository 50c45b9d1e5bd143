//! Endoscopic data attached to a torsion dual-torus element and a pinned
//! automorphism, the transfer-factor pieces and their assembly, the packet
//! parameterization with its sign twist, and the two sliced sides of the
//! character identity at strongly regular elliptic coset elements.

use crate::characters::{
    stable_character, twisted_character, CharacterValue, OrbitSystem, TwistedTorusElement, TOL_REG,
};
use crate::cohomology::{tn_pair, weyl_inv_class, DualDatum, HyperCocycle};
use crate::covers::GenuineCharacter;
use crate::exactnum::{csign, Circle, Cx, Polar, Rat};
use crate::linalg::*;
use crate::realstructure::{generic_chamber, q_invariant, sign_character, EllipticTorusDatum};
use crate::rootdata::{fold, BasedRootDatum, Folding, OrbitKind, PinnedAutomorphism, WeylElement};
use crate::{Error, Result};
use num_traits::Zero;

/// Optional mutations for sensitivity runs: each deliberately breaks one
/// ingredient of the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mutation {
    #[default]
    None,
    /// Replace the packet sign twist by the trivial character.
    DropEpsilon,
    /// Force the splitting-invariant piece to −1.
    FlipDeltaI,
}

/// A refined endoscopic datum at the combinatorial level: the torsion angle
/// `s_0` of the dual-torus element and the pinned automorphism (the image of
/// the inverse of the twisted part).
#[derive(Clone, Debug)]
pub struct EndoscopicDatum {
    pub s0: QVec,
    pub a: PinnedAutomorphism,
}

/// Torus-level test that `s_0 ⋊ a^{-1}` centralizes the parameter with
/// infinitesimal character `λ`: the automorphism must fix `λ` and `s_0` (mod
/// the lattice), and `(1 − w_0)·s_0` must be integral so that conjugation by
/// the lift of the real Weyl point fixes `s_0`.
pub fn is_in_twisted_centralizer(
    datum: &BasedRootDatum,
    s0: &QVec,
    a: &PinnedAutomorphism,
    lambda: &QVec,
) -> bool {
    if a.apply_star_q(lambda) != *lambda {
        return false;
    }
    let integral = |v: &QVec| v.iter().all(|x| x.fract().is_zero());
    if !integral(&sub_qvec(&a.apply_star_q(s0), s0)) {
        return false;
    }
    let w0 = datum.longest_element();
    integral(&sub_qvec(s0, &w0.apply_star_q(s0)))
}

/// The endoscopic group in folded coordinates: roots are the selected orbit
/// norms on the invariant character lattice, coroots the coinvariant classes
/// of member coroots. An empty root list is a torus.
#[derive(Clone, Debug)]
pub struct EndoscopicGroup {
    pub roots: Vec<IVec>,
    pub coroots: Vec<IVec>,
    /// Orbit indices (in the classification of ⟨a⟩ on all roots) that were
    /// selected.
    pub selected_orbits: Vec<usize>,
    /// Based root datum when H has roots; `None` for the torus case.
    pub datum: Option<BasedRootDatum>,
    /// Coordinates bookkeeping shared with the ambient group.
    pub folding: Folding,
}

impl EndoscopicGroup {
    pub fn q_invariant(&self) -> usize {
        match &self.datum {
            Some(d) => q_invariant(&EllipticTorusDatum::new(d.clone())),
            None => 0,
        }
    }

    pub fn weyl_group(&self) -> Vec<WeylElement> {
        match &self.datum {
            Some(d) => d.weyl_group(),
            None => vec![WeylElement::identity(self.folding.datum.dim())],
        }
    }

    /// Split rank of the quasi-split form: the fixed space of `−w_0` on the
    /// character lattice. The central directions are anisotropic and
    /// contribute nothing.
    pub fn split_rank(&self) -> usize {
        match &self.datum {
            None => 0,
            Some(d) => {
                let w0 = d.longest_element();
                let mut m = w0.mstar.clone();
                for (i, row) in m.iter_mut().enumerate() {
                    row[i] += 1;
                }
                kernel_basis(&m).len()
            }
        }
    }

    /// `R_{f_H}^+`: indices into `roots` of the chamber opposite to `λ_H`.
    pub fn chamber(&self, lambda_h: &QVec) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, coroot) in self.coroots.iter().enumerate() {
            let v = dot_qi(lambda_h, coroot);
            if v.is_zero() {
                return Err(Error::Singular("parameter is singular on H".into()));
            }
            if v < Rat::zero() {
                out.push(i);
            }
        }
        Ok(out)
    }
}

/// Build the endoscopic group attached to `(s_0, a)`: an ⟨a⟩-orbit of roots
/// enters exactly when the orbit value of `s_0 ⋊ a^{-1}` on its coroot norm
/// equals 1 (line signs included).
pub fn build_endoscopic_group(
    datum: &BasedRootDatum,
    endo: &EndoscopicDatum,
) -> Result<EndoscopicGroup> {
    let folding = fold(datum, &endo.a)?;
    let orbits = crate::rootdata::classify_orbits(datum, &endo.a)?;
    let mut entries: Vec<(IVec, IVec, bool)> = Vec::new();
    let mut selected_orbits = Vec::new();
    for (oi, o) in orbits.iter().enumerate() {
        let mut ncoroot = vec![0i64; datum.dim()];
        let mut nroot = vec![0i64; datum.dim()];
        for &i in &o.orbit {
            ncoroot = add_vec(&ncoroot, &datum.roots()[i].coroot);
            nroot = add_vec(&nroot, &datum.roots()[i].vec);
        }
        let val = Circle::new(dot_qi(&endo.s0, &ncoroot)) * Circle::from_sign(o.line_sign);
        if !val.is_one() {
            continue;
        }
        if o.kind != OrbitKind::R1 {
            return Err(Error::Unsupported(
                "endoscopic selection of an R2/R3 orbit is outside the supported catalog".into(),
            ));
        }
        // root: the orbit norm as an invariant vector, in orbit-sum basis
        // coordinates; coroot: the coinvariant class of a member's coroot.
        let root_folded: IVec = folding
            .orbits
            .iter()
            .map(|ob| {
                let v = nroot[ob[0]];
                debug_assert!(ob.iter().all(|&i| nroot[i] == v));
                v
            })
            .collect();
        let rep_coroot = &datum.roots()[o.orbit[0]].coroot;
        let coroot_folded: IVec = folding
            .orbits
            .iter()
            .map(|ob| ob.iter().map(|&i| rep_coroot[i]).sum())
            .collect();
        let positive = datum.roots()[o.orbit[0]].is_positive();
        entries.push((root_folded, coroot_folded, positive));
        selected_orbits.push(oi);
    }
    let datum_h = if entries.is_empty() {
        None
    } else {
        let positives: Vec<&(IVec, IVec, bool)> =
            entries.iter().filter(|(_, _, p)| *p).collect();
        let simples: Vec<(IVec, IVec)> = positives
            .iter()
            .filter(|(r, _, _)| {
                !positives.iter().any(|(r1, _, _)| {
                    positives.iter().any(|(r2, _, _)| add_vec(r1, r2) == *r)
                })
            })
            .map(|(r, c, _)| (r.clone(), c.clone()))
            .collect();
        let (sr, sc): (Vec<IVec>, Vec<IVec>) = simples.into_iter().unzip();
        let d = BasedRootDatum::new(sr, sc).map_err(|e| {
            Error::InvalidDatum(format!(
                "selected orbit norms are not closed under reflections: {e}"
            ))
        })?;
        let generated: std::collections::HashSet<IVec> =
            d.roots().iter().map(|r| r.vec.clone()).collect();
        let selected: std::collections::HashSet<IVec> =
            entries.iter().map(|(r, _, _)| r.clone()).collect();
        if generated != selected {
            return Err(Error::InvalidDatum(
                "selected orbit norms are not closed under reflections".into(),
            ));
        }
        Some(d)
    };
    let (roots, coroots) = entries.into_iter().map(|(r, c, _)| (r, c)).unzip();
    Ok(EndoscopicGroup { roots, coroots, selected_orbits, datum: datum_h, folding })
}

/// The first transfer-factor piece. With chamber-based splitting data it is
/// trivial at elliptic points; exposed so sensitivity runs can flip it.
pub fn delta_i(mutation: Mutation) -> Cx {
    match mutation {
        Mutation::FlipDeltaI => Cx::real(-1.0),
        _ => Cx::one(),
    }
}

/// The transfer-factor pieces at a related pair, as computed from the
/// chamber-based data, plus the quarter-turn constant and the Kottwitz sign
/// (1 in the quasi-split scope).
#[derive(Clone, Debug)]
pub struct TransferFactorBundle {
    pub delta_i: Cx,
    pub delta_ii: Cx,
    pub delta_iii: Cx,
    pub delta_iv: Cx,
    pub eps_const: Cx,
    pub kottwitz_sign: i64,
}

impl TransferFactorBundle {
    /// `ε·Δ_I^{-1}·Δ_II·Δ_III^{-1}·Δ_IV^{-1}`, the normalization with the
    /// fourth piece inverted.
    pub fn delta_double_prime(&self) -> Cx {
        self.eps_const
            * self.delta_i.inv()
            * self.delta_ii
            * self.delta_iii.inv()
            * self.delta_iv.inv()
    }
}

/// The sign of the inner form; 1 throughout the quasi-split scope. It
/// multiplies the spectral side of the identity.
pub const KOTTWITZ_SIGN: i64 = 1;

/// Lift a coinvariant-coordinate rational vector to ambient coordinates by
/// placing the full value on the first index of each orbit.
pub fn lift_coinvariant(folding: &Folding, v: &QVec) -> QVec {
    let dim = folding.project[0].len();
    let mut out = vec![Rat::zero(); dim];
    for (o, val) in folding.orbits.iter().zip(v) {
        out[o[0]] = *val;
    }
    out
}

fn is_dominant_regular(datum: &BasedRootDatum, lambda: &QVec) -> bool {
    datum
        .roots()
        .iter()
        .filter(|r| r.is_positive())
        .all(|r| dot_qi(lambda, &r.coroot) > Rat::zero())
}

/// Everything fixed once the datum, automorphism, parameter and endoscopic
/// element are chosen; both sides of the identity evaluate against this.
pub struct SlicedContext {
    pub torus: EllipticTorusDatum,
    pub a: PinnedAutomorphism,
    pub lambda: QVec,
    pub endo: EndoscopicDatum,
    pub h: EndoscopicGroup,
    /// Elements of the full Weyl group commuting with the automorphism.
    pub weyl_a: Vec<WeylElement>,
    /// Realized (compact-root) Weyl elements commuting with the automorphism.
    pub real_weyl_a: Vec<WeylElement>,
    /// Root indices of `R_f^+` for the generic anchor (standard negatives).
    pub chamber: Vec<usize>,
    /// Shifted integral weight `λ − ρ` of the anchor character.
    pub shifted_weight: IVec,
    pub mutation: Mutation,
}

impl SlicedContext {
    pub fn new(
        datum: BasedRootDatum,
        a: PinnedAutomorphism,
        lambda: QVec,
        s0: QVec,
        mutation: Mutation,
    ) -> Result<Self> {
        if !is_dominant_regular(&datum, &lambda) {
            return Err(Error::Singular(
                "infinitesimal character must be regular dominant".into(),
            ));
        }
        if !is_in_twisted_centralizer(&datum, &s0, &a, &lambda) {
            return Err(Error::NotFixed(
                "endoscopic element does not centralize the parameter".into(),
            ));
        }
        let endo = EndoscopicDatum { s0, a: a.clone() };
        let h = build_endoscopic_group(&datum, &endo)?;
        let torus = EllipticTorusDatum::new(datum);
        let datum_ref = torus.datum();
        let weyl = datum_ref.weyl_group();
        let weyl_a: Vec<WeylElement> =
            weyl.iter().filter(|w| a.commutes_with(w)).cloned().collect();
        let real_weyl_a: Vec<WeylElement> = torus
            .real_weyl_group()
            .into_iter()
            .filter(|w| a.commutes_with(w))
            .collect();
        let f = generic_chamber(&torus);
        let chamber = f.positive_roots.clone();
        let chi = GenuineCharacter::new(datum_ref, lambda.clone())?;
        let shifted_weight = crate::covers::rho_shifted_weight(datum_ref, &chi, &f)?;
        Ok(SlicedContext {
            torus,
            a,
            lambda,
            endo,
            h,
            weyl_a,
            real_weyl_a,
            chamber,
            shifted_weight,
            mutation,
        })
    }

    pub fn datum(&self) -> &BasedRootDatum {
        self.torus.datum()
    }

    fn check_coset(&self, delta: &TwistedTorusElement) -> Result<()> {
        let expect = usize::from(!self.a.is_identity());
        if delta.a_power != expect {
            return Err(Error::InvalidDatum(format!(
                "coset power {} does not match the chosen automorphism",
                delta.a_power
            )));
        }
        Ok(())
    }

    /// Strong regularity of a coset element, with the standard guard.
    pub fn admissible(&self, delta: &TwistedTorusElement) -> bool {
        if self.check_coset(delta).is_err() {
            return false;
        }
        let b = self.a.power(delta.a_power);
        match OrbitSystem::new(self.datum(), &b) {
            Ok(sys) => sys.strongly_regular(&delta.angles, TOL_REG),
            Err(_) => false,
        }
    }

    fn epsilon_twist(&self) -> Result<i64> {
        if self.mutation == Mutation::DropEpsilon {
            return Ok(1);
        }
        sign_character(&self.torus, &self.a)
    }

    /// Coset representatives of `Ω_R^a \ Ω^a`, deterministically ordered.
    pub fn member_cosets(&self) -> Vec<WeylElement> {
        let mut reps: Vec<WeylElement> = Vec::new();
        let mut covered: std::collections::HashSet<IMat> = std::collections::HashSet::new();
        for w in &self.weyl_a {
            if covered.contains(&w.mstar) {
                continue;
            }
            for u in &self.real_weyl_a {
                covered.insert(u.compose(w).mstar);
            }
            reps.push(w.clone());
        }
        reps
    }

    /// Norm-class representatives for `Ω_H \ Ω^a`, as ambient Weyl elements.
    pub fn norm_cosets(&self) -> Vec<WeylElement> {
        let h_weyl = self.h.weyl_group();
        let k = self.h.folding.datum.dim();
        let probes: Vec<QVec> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| Rat::from_integer(i64::from(i == j)))
                    .collect()
            })
            .collect();
        let descend = |w: &WeylElement| -> Vec<QVec> {
            probes
                .iter()
                .map(|p| {
                    let ambient = lift_coinvariant(&self.h.folding, p);
                    self.h.folding.project_sub_q(&w.apply_sub_q(&ambient))
                })
                .collect()
        };
        let mut reps: Vec<WeylElement> = Vec::new();
        let mut covered: std::collections::HashSet<Vec<QVec>> = std::collections::HashSet::new();
        for w in &self.weyl_a {
            let fp = descend(w);
            if covered.contains(&fp) {
                continue;
            }
            for u in &h_weyl {
                let fp_u: Vec<QVec> = fp.iter().map(|p| u.apply_sub_q(p)).collect();
                covered.insert(fp_u);
            }
            reps.push(w.clone());
        }
        reps
    }

    /// The coefficient `⟨τ̃_◁, s̃⟩` of the packet member at the Weyl coset of
    /// `w`, for the extension normalized by `ζ = 1`: the sign twist times the
    /// pairing of `s_0` against the position class of the translate. An
    /// exact root of unity.
    pub fn member_coefficient(&self, w: &WeylElement) -> Result<Circle> {
        let eps = self.epsilon_twist()?;
        let inv = weyl_inv_class(self.datum(), w);
        Ok(Circle::new(dot_qi(&self.endo.s0, &inv)) * Circle::from_sign(eps))
    }

    /// Left side of the identity at the coset element: the sum over
    /// twist-stable packet members of the member coefficient times the
    /// elliptic character value.
    pub fn lhs_sliced(&self, delta: &TwistedTorusElement) -> Result<CharacterValue> {
        self.lhs_sliced_with_extension(delta, Circle::one())
    }

    /// Same with an explicit extension choice `ζ` threaded through every
    /// member; the assembled value does not depend on it.
    pub fn lhs_sliced_with_extension(
        &self,
        delta: &TwistedTorusElement,
        zeta: Circle,
    ) -> Result<CharacterValue> {
        self.check_coset(delta)?;
        let datum = self.datum();
        let mut total = Cx::zero();
        let mut terms = Vec::new();
        for w in self.member_cosets() {
            let weight = w.apply_star(&self.shifted_weight);
            let chamber_w: Vec<usize> = self
                .chamber
                .iter()
                .map(|&i| {
                    datum
                        .root_index(&w.apply_star(&datum.roots()[i].vec))
                        .expect("Weyl image is a root")
                })
                .collect();
            // the coefficient for the same extension divides the ζ-value out;
            // folding it into the numerators keeps the cancellation exact
            let coeff = self.member_coefficient(&w)?;
            let prefactor = coeff * zeta.pow(delta.a_power as i64).inv();
            let character = twisted_character(
                &self.torus,
                &self.a,
                &weight,
                zeta,
                prefactor,
                &chamber_w,
                delta,
                &self.real_weyl_a,
                TOL_REG,
            )?;
            let term = character.value.scale(KOTTWITZ_SIGN as f64);
            terms.push(term);
            total = total + term;
        }
        Ok(CharacterValue { value: total, terms })
    }

    /// Norm of the coset element on the coinvariant side, folded coordinates.
    pub fn norm_of(&self, delta: &TwistedTorusElement) -> QVec {
        self.h.folding.project_sub_q(&delta.angles)
    }

    /// λ as a vector on the invariant lattice, folded coordinates.
    pub fn lambda_h(&self) -> QVec {
        self.h.folding.orbits.iter().map(|o| self.lambda[o[0]]).collect()
    }

    /// Integral shifted weight of the H-side character.
    pub fn shifted_weight_h(&self) -> Result<IVec> {
        let lam_h = self.lambda_h();
        let mut rho_h = vec![Rat::zero(); lam_h.len()];
        for (root, coroot) in self.h.roots.iter().zip(&self.h.coroots) {
            let v = dot_qi(&lam_h, coroot);
            if v.is_zero() {
                return Err(Error::Singular("parameter is singular on H".into()));
            }
            if v > Rat::zero() {
                for (s, x) in rho_h.iter_mut().zip(root) {
                    *s += Rat::new(*x, 2);
                }
            }
        }
        sub_qvec(&lam_h, &rho_h)
            .iter()
            .map(|x| {
                if x.fract().is_zero() {
                    Ok(x.to_integer())
                } else {
                    Err(Error::Unsupported(
                        "H-side weight is not integral; a central extension would be needed"
                            .into(),
                    ))
                }
            })
            .collect()
    }

    /// `i^{dim A^H − dim A^G_a}`: the quarter-turn constant of the factor
    /// comparison, from the split ranks of the two sides.
    pub fn epsilon_const(&self) -> Cx {
        let dim_ag_a = self.h.folding.datum.dim() as i64;
        let dim_ah = self.h.split_rank() as i64;
        Cx::i_pow(dim_ah - dim_ag_a)
    }

    /// All transfer-factor pieces at the related pair `(γ_w, δ̃'_w)`,
    /// computed from the chamber-based orbit products. The combination
    /// `ε·Δ_II/Δ_IV` is checked against the closed form
    /// `(−1)^{q(G^a)−q(H)}·det(1−γ_w|u_{f_H})/det(1−δ̃'_w|u_{f'})`.
    pub fn transfer_factors(
        &self,
        w: &WeylElement,
        gamma_w: &QVec,
        delta: &TwistedTorusElement,
    ) -> Result<TransferFactorBundle> {
        let datum = self.datum();
        let delta_w_angle = w.apply_sub_q(&delta.angles);
        let b = self.a.power(delta.a_power);
        let sys = OrbitSystem::new(datum, &b)?;
        let chamber_orbits = sys.orbits_in(&self.chamber)?;
        // ambient side: orbit products over R_f^+ with chamber-based data
        let mut ii_g = Circle::one();
        let mut iv_g: f64 = 1.0;
        for &oi in &chamber_orbits {
            let o = &sys.orbits[oi];
            let nval = Circle::new(dot_qi(&delta_w_angle, &o.norm_vector));
            if o.line_sign == 1 {
                if nval.is_one() {
                    return Err(Error::NotRegular("singular orbit value".into()));
                }
                ii_g = ii_g * csign::of_v_minus_one_over_i(nval).inv();
                iv_g *= crate::exactnum::abs_one_minus(nval);
            } else {
                let flipped = nval * Circle::minus_one();
                if flipped.is_one() {
                    return Err(Error::NotRegular("singular orbit value".into()));
                }
                ii_g = ii_g * csign::of_v_plus_one(nval).inv();
                iv_g *= crate::exactnum::abs_one_minus(flipped);
            }
        }
        // endoscopic side over its own opposite chamber
        let lam_h = self.lambda_h();
        let h_chamber = self.h.chamber(&lam_h)?;
        let mut ii_h = Circle::one();
        let mut iv_h: f64 = 1.0;
        for &i in &h_chamber {
            let v = Circle::new(dot_qi(gamma_w, &self.h.roots[i]));
            if v.is_one() {
                return Err(Error::NotRegular("norm is singular on H".into()));
            }
            ii_h = ii_h * csign::of_v_minus_one_over_i(v).inv();
            iv_h *= crate::exactnum::abs_one_minus(v);
        }
        let bundle = TransferFactorBundle {
            delta_i: delta_i(self.mutation),
            delta_ii: (ii_g * ii_h.inv()).to_cx(),
            delta_iii: self.delta_iii(w, gamma_w, delta)?,
            delta_iv: Cx::real(iv_g / iv_h),
            eps_const: self.epsilon_const(),
            kottwitz_sign: 1,
        };
        // two-route consistency of ε·Δ_II/Δ_IV
        let route_products = bundle.eps_const * bundle.delta_ii / bundle.delta_iv;
        let det_h = {
            let mut p = Polar::one();
            for &i in &h_chamber {
                let v = Circle::new(dot_qi(gamma_w, &self.h.roots[i]));
                p = p * crate::exactnum::one_minus_polar(v);
            }
            p.to_cx()
        };
        let det_g = crate::characters::twisted_det_polar(&sys, &chamber_orbits, &delta_w_angle)?
            .to_cx();
        let q_fix = q_invariant(&EllipticTorusDatum::new(fold(datum, &self.a)?.datum));
        let q_h = self.h.q_invariant();
        let sign = if (q_fix + q_h) % 2 == 0 { 1.0 } else { -1.0 };
        let route_closed = (det_h / det_g).scale(sign);
        if !route_products.approx_eq(&route_closed, 1e-10 * (1.0 + route_products.abs())) {
            return Err(Error::Inconsistent(format!(
                "transfer-factor ratio disagreement: products {route_products:?} vs closed form {route_closed:?}"
            )));
        }
        Ok(bundle)
    }

    /// The ratio `ε·Δ_II/Δ_IV`, with the internal two-route check.
    pub fn delta_ii_over_iv(
        &self,
        w: &WeylElement,
        gamma_w: &QVec,
        delta: &TwistedTorusElement,
    ) -> Result<Cx> {
        let b = self.transfer_factors(w, gamma_w, delta)?;
        Ok(b.eps_const * b.delta_ii / b.delta_iv)
    }

    /// The cohomological piece at the Weyl translate `w`: the H-side shifted
    /// character value at the translated norm, times the pairing of the
    /// inverted parameter datum against the position cocycle of the
    /// translate.
    pub fn delta_iii(
        &self,
        w: &WeylElement,
        gamma_w: &QVec,
        delta: &TwistedTorusElement,
    ) -> Result<Cx> {
        let weight_h = self.shifted_weight_h()?;
        let tau_val = Circle::new(dot_qi(gamma_w, &weight_h));
        let cocycle = HyperCocycle {
            z_class: weyl_inv_class(self.datum(), &w.inverse()),
            t_part: w.apply_sub_q(&delta.angles),
        };
        let dual = DualDatum {
            weight: neg_vec(&self.shifted_weight),
            s0: self.endo.s0.clone(),
        };
        let pairing = tn_pair(&dual, &cocycle, &self.a)?;
        Ok((tau_val * pairing).to_cx())
    }

    /// Stable character of the endoscopic group at a norm point.
    pub fn stable_character_h(&self, gamma: &QVec) -> Result<Cx> {
        let lam_h = self.lambda_h();
        match &self.h.datum {
            None => {
                let weight = self.shifted_weight_h()?;
                Ok(Circle::new(dot_qi(gamma, &weight)).to_cx())
            }
            Some(d) => Ok(stable_character(d, &lam_h, gamma, TOL_REG)?.value),
        }
    }

    /// Right side of the identity: the sum over stable norm classes of the
    /// assembled factor `ε·Δ_I^{-1}·Δ_II·Δ_III^{-1}·Δ_IV^{-1}` times the
    /// stable character of the endoscopic group.
    pub fn rhs_sliced(&self, delta: &TwistedTorusElement) -> Result<CharacterValue> {
        self.rhs_sliced_with_reps(delta, &self.norm_cosets())
    }

    /// Same, over a caller-supplied set of norm-class representatives; the
    /// value must not depend on the representatives chosen within each class.
    pub fn rhs_sliced_with_reps(
        &self,
        delta: &TwistedTorusElement,
        reps: &[WeylElement],
    ) -> Result<CharacterValue> {
        self.check_coset(delta)?;
        if !self.admissible(delta) {
            return Err(Error::NotRegular("coset element is not strongly regular".into()));
        }
        let gamma = self.norm_of(delta);
        let mut total = Cx::zero();
        let mut terms = Vec::new();
        for w in reps {
            let gamma_w = {
                let ambient = lift_coinvariant(&self.h.folding, &gamma);
                self.h.folding.project_sub_q(&w.apply_sub_q(&ambient))
            };
            let stheta = match self.stable_character_h(&gamma_w) {
                Ok(v) => v,
                // a class without a regular related norm contributes nothing
                Err(Error::NotRegular(_)) => {
                    terms.push(Cx::zero());
                    continue;
                }
                Err(e) => return Err(e),
            };
            let factors = self.transfer_factors(w, &gamma_w, delta)?;
            let term = factors.delta_double_prime() * stheta;
            terms.push(term);
            total = total + term;
        }
        Ok(CharacterValue { value: total, terms })
    }
}

/// A packet member: a coset of the realized Weyl group, the position class
/// indexing its component character, and an extension choice.
#[derive(Clone, Debug)]
pub struct PacketMember {
    pub coset_rep: WeylElement,
    /// Position class in `X_*/2X_*`; the component character is its pairing
    /// against 2-torsion dual elements.
    pub position_class: IVec,
    /// Component character values on the basis points `ϖ_i/2`.
    pub character_on_basis: Vec<i64>,
    pub extension: Circle,
}

/// Enumerate the discrete-series packet of the parameter with infinitesimal
/// character `λ`: members are indexed by cosets of the realized Weyl group,
/// with component characters given by the position pairing.
pub fn enumerate_packet(torus: &EllipticTorusDatum, lambda: &QVec) -> Result<Vec<PacketMember>> {
    let datum = torus.datum();
    if !is_dominant_regular(datum, lambda) {
        return Err(Error::Singular("packet needs a regular dominant parameter".into()));
    }
    let real = torus.real_weyl_group();
    let mut members = Vec::new();
    let mut covered: std::collections::HashSet<IMat> = std::collections::HashSet::new();
    for w in datum.weyl_group() {
        if covered.contains(&w.mstar) {
            continue;
        }
        for u in &real {
            covered.insert(u.compose(&w).mstar);
        }
        let position_class = weyl_inv_class(datum, &w);
        let character_on_basis = (0..datum.dim())
            .map(|i| if position_class[i] % 2 == 0 { 1 } else { -1 })
            .collect();
        members.push(PacketMember {
            coset_rep: w.clone(),
            position_class,
            character_on_basis,
            extension: Circle::one(),
        });
    }
    Ok(members)
}

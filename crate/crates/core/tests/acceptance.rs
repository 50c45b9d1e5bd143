//! Acceptance suite: one check per release criterion, each printing a
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the table.

use endo_core::characters::{OrbitSystem, TwistedTorusElement};
use endo_core::cohomology::{tn_pair, DualDatum, HyperCocycle};
use endo_core::endoscopy::{Mutation, SlicedContext};
use endo_core::exactnum::{rat, Circle, Rat};
use endo_core::lab::{catalog, run_packet, run_verify, VerifyParams};
use endo_core::linalg::{dot_qi, dot_qq, QVec};
use endo_core::realstructure::{
    generic_chamber, q_uf_parity, q_uf_signature, sign_character, EllipticTorusDatum,
};
use endo_core::rootdata::{
    classify_orbits, fold, gamma_angle, orbit_count_non_r3, trivializing_real_root,
    BasedRootDatum, OrbitKind, PinnedAutomorphism,
};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::Instant;

struct Gate {
    lines: Vec<(String, bool)>,
}

impl Gate {
    fn new() -> Self {
        Gate { lines: Vec::new() }
    }

    fn record(&mut self, name: &str, pass: bool, detail: String) {
        println!("criterion {:<28} {}  {}", name, if pass { "PASS" } else { "FAIL" }, detail);
        self.lines.push((name.to_string(), pass));
    }

    fn finish(self) {
        let failed: Vec<String> =
            self.lines.iter().filter(|(_, p)| !p).map(|(n, _)| n.clone()).collect();
        assert!(failed.is_empty(), "failed criteria: {failed:?}");
    }
}

/// Exact formal sums of unit-circle points with rational coefficients; the
/// coefficient ring for the companion-matrix determinant oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
struct FormalSum(BTreeMap<Circle, Rat>);

impl FormalSum {
    fn zero() -> Self {
        FormalSum(BTreeMap::new())
    }
    fn one() -> Self {
        FormalSum::from_circle(Circle::one(), Rat::from_integer(1))
    }
    fn from_circle(c: Circle, coeff: Rat) -> Self {
        let mut m = BTreeMap::new();
        if !coeff.is_zero() {
            m.insert(c, coeff);
        }
        FormalSum(m)
    }
    fn add(&self, other: &FormalSum) -> FormalSum {
        let mut m = self.0.clone();
        for (c, q) in &other.0 {
            let e = m.entry(*c).or_insert_with(Rat::zero);
            *e += *q;
            if e.is_zero() {
                m.remove(c);
            }
        }
        FormalSum(m)
    }
    fn mul(&self, other: &FormalSum) -> FormalSum {
        let mut out = FormalSum::zero();
        for (c1, q1) in &self.0 {
            for (c2, q2) in &other.0 {
                out = out.add(&FormalSum::from_circle(*c1 * *c2, *q1 * *q2));
            }
        }
        out
    }
    fn neg(&self) -> FormalSum {
        FormalSum(self.0.iter().map(|(c, q)| (*c, -*q)).collect())
    }
}

fn formal_det(m: &[Vec<FormalSum>]) -> FormalSum {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = FormalSum::zero();
    for i in 0..n {
        let minor: Vec<Vec<FormalSum>> = m
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != i)
            .map(|(_, row)| row[1..].to_vec())
            .collect();
        let term = m[i][0].mul(&formal_det(&minor));
        acc = acc.add(&if i % 2 == 0 { term } else { term.neg() });
    }
    acc
}

fn random_angles(rng: &mut ChaCha8Rng, dim: usize, max_den: i64) -> QVec {
    (0..dim)
        .map(|_| {
            let den = rng.gen_range(2..=max_den);
            rat(rng.gen_range(0..den), den)
        })
        .collect()
}

#[test]
fn acceptance() {
    let mut gate = Gate::new();

    // 1. classical identity on SL2, both endoscopic elements
    {
        let t0 = Instant::now();
        let mut worst = 0.0f64;
        let mut pass = true;
        for s0 in ["0", "1/2"] {
            let mut p = VerifyParams::new("SL2");
            p.points = 50;
            p.tol = 1e-9;
            p.s0 = Some(vec![parse_rat(s0)]);
            let r = run_verify(&p).expect("SL2 verify runs");
            pass &= r.pass && r.points_tested >= 50;
            worst = worst.max(r.max_abs_gap);
        }
        let dt = t0.elapsed();
        pass &= dt.as_secs_f64() < 1.0;
        gate.record(
            "1-identity-classical",
            pass,
            format!("max gap {worst:.2e}, {:?}", dt),
        );
    }

    // 2. twisted identity on SL2xSL2-swap, both endoscopic elements
    {
        let t0 = Instant::now();
        let mut worst = 0.0f64;
        let mut pass = true;
        for s0 in [vec![Rat::zero(); 2], vec![rat(1, 2), rat(1, 2)]] {
            let mut p = VerifyParams::new("SL2xSL2-swap");
            p.points = 50;
            p.tol = 1e-9;
            p.s0 = Some(s0);
            let r = run_verify(&p).expect("twisted verify runs");
            pass &= r.pass && r.points_tested >= 50;
            worst = worst.max(r.max_abs_gap);
        }
        let dt = t0.elapsed();
        pass &= dt.as_secs_f64() < 5.0;
        gate.record(
            "2-identity-twisted",
            pass,
            format!("max gap {worst:.2e}, {:?}", dt),
        );
    }

    // 3. dropping the sign twist must break the twisted identity visibly
    {
        let mut p = VerifyParams::new("SL2xSL2-swap");
        p.points = 50;
        p.mutation = Mutation::DropEpsilon;
        let r = run_verify(&p).expect("mutated verify runs");
        let pass = r.max_abs_gap >= 0.1;
        gate.record(
            "3-sign-twist-necessity",
            pass,
            format!("max gap {:.3} under drop-epsilon", r.max_abs_gap),
        );
    }

    // 4. orbit determinant law vs exact companion-matrix oracle
    {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let mut pass = true;
        let mut tested = 0usize;
        let entries = catalog();
        'outer: while tested < 1000 {
            for entry in &entries {
                for (_, a) in &entry.automorphisms {
                    let sys = OrbitSystem::new(&entry.datum, a).unwrap();
                    let t = random_angles(&mut rng, entry.datum.dim(), 24);
                    let oi = rng.gen_range(0..sys.orbits.len());
                    let v = sys.value(oi, &t);
                    // formula side: 1 − v as a formal sum
                    let formula = FormalSum::one()
                        .add(&FormalSum::from_circle(v, Rat::from_integer(-1)));
                    // oracle: det(1 − M) for the companion matrix of the
                    // orbit action, expanded exactly by cofactors
                    let n = sys.orbits[oi].indices.len();
                    let mut m = vec![vec![FormalSum::zero(); n]; n];
                    #[allow(clippy::needless_range_loop)]
                    for i in 0..n {
                        m[i][i] = FormalSum::one();
                        if i + 1 < n {
                            m[i][i + 1] = FormalSum::one().neg();
                        }
                    }
                    m[n - 1][0] = m[n - 1][0]
                        .add(&FormalSum::from_circle(v, Rat::from_integer(-1)));
                    let oracle = formal_det(&m);
                    if oracle != formula {
                        pass = false;
                        break 'outer;
                    }
                    tested += 1;
                    if tested >= 1000 {
                        break 'outer;
                    }
                }
            }
        }
        gate.record("4-determinant-law", pass, format!("{tested} orbit/element pairs, exact"));
    }

    // 5. modulus identity: chamber values plus inverses = all values, as
    //    exact angle multisets, at 200 random twisted elements per entry
    {
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let mut pass = true;
        for entry in catalog() {
            let a = entry.automorphism(&entry.default_auto).unwrap();
            let torus = EllipticTorusDatum::new(entry.datum.clone());
            let f = generic_chamber(&torus);
            let sys = OrbitSystem::new(&entry.datum, a).unwrap();
            let chamber = sys.orbits_in(&f.positive_roots).unwrap();
            for _ in 0..200 {
                let t = random_angles(&mut rng, entry.datum.dim(), 200);
                let mut m1: Vec<Circle> = chamber
                    .iter()
                    .flat_map(|&oi| {
                        let v = sys.value(oi, &t);
                        [v, v.inv()]
                    })
                    .collect();
                let mut m2: Vec<Circle> =
                    (0..sys.orbits.len()).map(|oi| sys.value(oi, &t)).collect();
                m1.sort();
                m2.sort();
                pass &= m1 == m2;
            }
        }
        gate.record("5-modulus-identity", pass, "200 elements × 4 entries, exact".into());
    }

    // 6. homology-degree parity vs the signature-count oracle, all chambers
    {
        let mut pass = true;
        let data: Vec<BasedRootDatum> = vec![
            BasedRootDatum::simply_connected("A", 1).unwrap(),
            BasedRootDatum::product(&[
                BasedRootDatum::simply_connected("A", 1).unwrap(),
                BasedRootDatum::simply_connected("A", 1).unwrap(),
            ])
            .unwrap(),
            BasedRootDatum::simply_connected("A", 2).unwrap(),
            BasedRootDatum::simply_connected("C", 2).unwrap(),
            BasedRootDatum::simply_connected("A", 3).unwrap(),
            BasedRootDatum::simply_connected("B", 3).unwrap(),
            BasedRootDatum::simply_connected("C", 3).unwrap(),
        ];
        let mut chambers = 0usize;
        for d in data {
            let torus = EllipticTorusDatum::new(d.clone());
            let f = generic_chamber(&torus);
            for w in d.weyl_group() {
                let p = q_uf_parity(&torus, &f, &w).unwrap();
                pass &= p as usize == q_uf_signature(&torus, &f, &w) % 2;
                chambers += 1;
            }
        }
        gate.record("6-parity-law", pass, format!("{chambers} chambers, exact"));
    }

    // 7. folding and orbit suite
    {
        let t0 = Instant::now();
        let mut pass = true;
        for entry in catalog() {
            for (_, a) in &entry.automorphisms {
                let folded = fold(&entry.datum, a).unwrap();
                pass &= orbit_count_non_r3(&entry.datum, a).unwrap()
                    == folded.datum.num_positive();
            }
        }
        let d4 = BasedRootDatum::simply_connected("D", 4).unwrap();
        let tri = PinnedAutomorphism::from_simple_permutation(&d4, vec![2, 1, 3, 0]).unwrap();
        let mut fixed: Vec<Vec<i64>> = d4
            .roots()
            .iter()
            .filter(|r| r.is_positive() && tri.apply_star(&r.vec) == r.vec)
            .map(|r| r.expansion.clone())
            .collect();
        fixed.sort();
        let mut want = vec![vec![0, 1, 0, 0], vec![1, 1, 1, 1], vec![1, 2, 1, 1]];
        want.sort();
        pass &= fixed == want;
        let g2 = fold(&d4, &tri).unwrap().datum;
        pass &= g2.rank() == 2 && g2.roots().len() == 12 && {
            let c = g2.cartan();
            c[0][1] * c[1][0] == 3
        };
        pass &= classify_orbits(&d4, &tri)
            .unwrap()
            .iter()
            .all(|o| o.kind != OrbitKind::R3);
        // sign character is a homomorphism on the full symmetry group of D4
        let entry = catalog().into_iter().find(|e| e.name == "Spin44-S3").unwrap();
        let torus = EllipticTorusDatum::new(d4.clone());
        for (_, a1) in &entry.automorphisms {
            for (_, a2) in &entry.automorphisms {
                let prod = a1.compose(a2);
                let ab = entry
                    .automorphisms
                    .iter()
                    .find(|(_, a)| a.mstar == prod.mstar)
                    .expect("symmetry group closed");
                pass &= sign_character(&torus, &ab.1).unwrap()
                    == sign_character(&torus, a1).unwrap() * sign_character(&torus, a2).unwrap();
            }
        }
        let dt = t0.elapsed();
        pass &= dt.as_secs_f64() < 10.0;
        gate.record("7-folding-orbit-suite", pass, format!("exact, {:?}", dt));
    }

    // 8. pairing engine: brute-force cocycle enumeration, bilinearity,
    //    nondegeneracy for anisotropic tori of rank ≤ 4
    {
        let mut pass = true;
        for r in 1..=4usize {
            let ambient = BasedRootDatum::product(
                &vec![BasedRootDatum::simply_connected("A", 1).unwrap(); r],
            )
            .unwrap();
            let id_r = PinnedAutomorphism::identity(&ambient);
            // nondegeneracy: the pairing matrix on basis classes against
            // basis half-characters must have full rank over F2
            let mut mat = vec![vec![0u8; r]; r];
            #[allow(clippy::needless_range_loop)]
            for i in 0..r {
                for j in 0..r {
                    let mut z = vec![0i64; r];
                    z[i] = 1;
                    let mut s0 = vec![Rat::zero(); r];
                    s0[j] = rat(1, 2);
                    mat[i][j] = u8::from(!Circle::new(dot_qi(&s0, &z)).is_one());
                }
            }
            let mut rank = 0;
            for col in 0..r {
                if let Some(p) = (rank..r).find(|&i| mat[i][col] == 1) {
                    mat.swap(rank, p);
                    for i in 0..r {
                        if i != rank && mat[i][col] == 1 {
                            for j in 0..r {
                                mat[i][j] ^= mat[rank][j];
                            }
                        }
                    }
                    rank += 1;
                }
            }
            pass &= rank == r;
            // brute force: every level-4 representative of a class gives the
            // same value, equal to the pairing; and bilinearity holds
            for class_bits in 0..(1usize << r) {
                let class: Vec<i64> = (0..r).map(|i| ((class_bits >> i) & 1) as i64).collect();
                for s_bits in 0..(1usize << r) {
                    let s0: QVec = (0..r)
                        .map(|j| if (s_bits >> j) & 1 == 1 { rat(1, 2) } else { Rat::zero() })
                        .collect();
                    let dual = DualDatum { weight: vec![0; r], s0: s0.clone() };
                    let want = tn_pair(
                        &dual,
                        &HyperCocycle { z_class: class.clone(), t_part: vec![Rat::zero(); r] },
                        &id_r,
                    )
                    .unwrap();
                    for shift_bits in 0..(1usize << r) {
                        let rep: QVec = (0..r)
                            .map(|i| {
                                Rat::new(class[i], 2)
                                    + if (shift_bits >> i) & 1 == 1 {
                                        Rat::from_integer(1)
                                    } else {
                                        Rat::zero()
                                    }
                            })
                            .collect();
                        let doubled: QVec = rep.iter().map(|x| *x * rat(2, 1)).collect();
                        pass &= Circle::new(dot_qq(&s0, &doubled)) == want;
                    }
                    // bilinearity against a second class
                    let class2: Vec<i64> = (0..r).map(|i| class[i] + 2).collect();
                    let sum: Vec<i64> = class.iter().zip(&class2).map(|(a, b)| a + b).collect();
                    let v1 = Circle::new(dot_qi(&s0, &class));
                    let v2 = Circle::new(dot_qi(&s0, &class2));
                    let vs = Circle::new(dot_qi(&s0, &sum));
                    pass &= vs == v1 * v2;
                }
            }
        }
        gate.record("8-tate-nakayama-engine", pass, "rank ≤ 4, exact".into());
    }

    // 9. trivializing real root: 500 random products in B3, C3, D4 each
    {
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let mut pass = true;
        for d in [
            BasedRootDatum::simply_connected("B", 3).unwrap(),
            BasedRootDatum::simply_connected("C", 3).unwrap(),
            BasedRootDatum::simply_connected("D", 4).unwrap(),
        ] {
            for _ in 0..500 {
                let n = rng.gen_range(1..=4usize);
                let betas: Vec<Vec<i64>> = (0..n)
                    .map(|_| d.roots()[rng.gen_range(0..d.roots().len())].vec.clone())
                    .collect();
                let t = gamma_angle(&d, &betas).unwrap();
                // independent existence oracle
                let exists = d.roots().iter().any(|r| Circle::new(dot_qi(&t, &r.vec)).is_one());
                pass &= exists;
                match trivializing_real_root(&d, &betas) {
                    Ok(alpha) => pass &= Circle::new(dot_qi(&t, &alpha)).is_one(),
                    Err(_) => pass = false,
                }
            }
        }
        gate.record("9-trivializing-root", pass, "3 × 500 products, exact".into());
    }

    // 10. packet sizes and extension-independence of the assembled summand
    {
        let mut pass = true;
        for (entry, want) in [("SL2", 2usize), ("Sp4", 4), ("Spin44-S3", 12)] {
            pass &= run_packet(entry, None).unwrap().size == want;
        }
        let a1a1 = BasedRootDatum::product(&[
            BasedRootDatum::simply_connected("A", 1).unwrap(),
            BasedRootDatum::simply_connected("A", 1).unwrap(),
        ])
        .unwrap();
        let torus = EllipticTorusDatum::new(a1a1.clone());
        pass &= endo_core::endoscopy::enumerate_packet(&torus, &a1a1.rho()).unwrap().len() == 4;

        // extension independence: the two sign twists of an order-two
        // extension give bit-identical assembled values, and arbitrary
        // root-of-unity twists agree to working precision
        let swap = PinnedAutomorphism::from_simple_permutation(&a1a1, vec![1, 0]).unwrap();
        let ctx = SlicedContext::new(
            a1a1,
            swap,
            vec![rat(3, 1), rat(3, 1)],
            vec![Rat::zero(); 2],
            Mutation::None,
        )
        .unwrap();
        let delta = TwistedTorusElement::new(vec![rat(1, 7), rat(2, 9)], 1);
        let base = ctx.lhs_sliced_with_extension(&delta, Circle::one()).unwrap().value;
        let flipped = ctx
            .lhs_sliced_with_extension(&delta, Circle::minus_one())
            .unwrap()
            .value;
        pass &= base.re == flipped.re && base.im == flipped.im;
        for k in 1..8i64 {
            let zeta = Circle::new(rat(k, 8));
            let v = ctx.lhs_sliced_with_extension(&delta, zeta).unwrap().value;
            pass &= v.approx_eq(&base, 1e-12);
        }
        gate.record("10-packets-and-extensions", pass, "sizes 2/4/4/12; ζ-independence".into());
    }

    gate.finish();
}

fn parse_rat(s: &str) -> Rat {
    if let Some((n, d)) = s.split_once('/') {
        Rat::new(n.parse().unwrap(), d.parse().unwrap())
    } else {
        Rat::from_integer(s.parse().unwrap())
    }
}

//! Acceptance suite: one PASS/FAIL line per criterion, then a nonzero exit if
//! anything failed. Run with `cargo test -p logder-core --test acceptance`.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use logder_core::derivation::{euler_derivation, pairwise_compatibility, tangency};
use logder_core::poly::{rat, ratio};
use logder_core::{
    divisibility_lemma_check, membership, saito_classic, saito_multi, saito_several, solve,
    Derivation, MultiplicitySpec, Poly, PolyMatrix, SearchMode, SearchProblem, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    if t > limit {
        return Err(format!("{what} took {t:?}, limit {limit:?}"));
    }
    Ok(())
}

// 1. Affine conic: unit exactly 1 and cofactors 8y, 2x + 1.
fn affine_conic_basis() -> Outcome {
    let start = Instant::now();
    let inst = affine_conic();
    let r = saito_classic(&inst.f, &inst.basis);
    within(start, Duration::from_millis(100), "criterion")?;
    ensure!(r.verdict == Verdict::Free, "verdict {}", r.verdict);
    ensure!(r.unit_witness == Some(rat(1)), "unit {:?}", r.unit_witness);
    ensure!(r.evidence.as_ref() == Some(&inst.f), "det is not f");
    let cof: Vec<Poly> = r.cofactors.iter().map(|row| row[0].clone()).collect();
    ensure!(
        cof == vec![p("8*y", 2), p("2*x + 1", 2)],
        "cofactors {cof:?}"
    );
    Ok(format!(
        "u = 1, cofactors ({}, {}) in {:?}",
        cof[0],
        cof[1],
        start.elapsed()
    ))
}

// 2. Reflection arrangements n = 1..5.
fn reflection_arrangements() -> Outcome {
    let mut units = Vec::new();
    for n in 1..=5 {
        let start = Instant::now();
        let inst = reflection(n);
        let r = saito_classic(&inst.f, &inst.basis);
        within(start, Duration::from_secs(5), &format!("n = {n}"))?;
        ensure!(r.verdict == Verdict::Free, "n = {n}: verdict {}", r.verdict);
        let u = r.unit_witness.clone().unwrap();
        ensure!(u == rat(1) || u == rat(-1), "n = {n}: |u| != 1 (u = {u})");
        ensure!(r.recheck(), "n = {n}: recheck failed");
        units.push(u.to_string());
    }
    Ok(format!("u = [{}] for n = 1..5", units.join(", ")))
}

// 3. Conic and tangent line: det = 6z(x^2 + yz).
fn conic_tangent_line() -> Outcome {
    let inst = conic_tangent();
    let cols: Vec<Vec<Poly>> = inst.basis.iter().map(|d| d.coeffs().to_vec()).collect();
    let det = PolyMatrix::from_columns(&cols)
        .unwrap()
        .determinant()
        .unwrap();
    let expected = p("6*z*(x^2 + y*z)", 3);
    ensure!(det == expected, "det = {det}");
    let r = saito_classic(&inst.f, &inst.basis);
    ensure!(r.verdict == Verdict::Free, "verdict {}", r.verdict);
    ensure!(r.unit_witness == Some(rat(6)), "unit {:?}", r.unit_witness);
    Ok(format!("det = {det}, u = 6"))
}

// 4. Lowest-degree derivation with δ2: not free, factor 2x + 1.
fn negative_control() -> Outcome {
    let inst = affine_conic();
    let ds = vec![der(&["2*y", "-(2*x + 1)"], 2), inst.basis[1].clone()];
    let r = saito_classic(&inst.f, &ds);
    ensure!(r.verdict == Verdict::NotFree, "verdict {}", r.verdict);
    let q = r.failure_factor.clone().unwrap();
    ensure!(q.is_associate(&p("2*x + 1", 2)), "failure factor {q}");
    ensure!(r.recheck(), "recheck failed");
    Ok(format!("not free, failure factor {q}"))
}

// 5. Diagonal multiderivations.
fn multiderivations() -> Outcome {
    for m1 in 1..=4u32 {
        for m2 in 1..=4u32 {
            let spec = MultiplicitySpec::new(vec![(p("x", 2), m1), (p("y", 2), m2)]).unwrap();
            let ds = vec![
                der(&[&format!("x^{m1}"), "0"], 2),
                der(&["0", &format!("y^{m2}")], 2),
            ];
            let r = saito_multi(&spec, &ds);
            ensure!(r.verdict == Verdict::Free, "({m1}, {m2}): {}", r.verdict);
            ensure!(
                r.unit_witness == Some(rat(1)),
                "({m1}, {m2}): unit {:?}",
                r.unit_witness
            );
        }
    }
    Ok("16 multiplicity pairs free with u = 1".into())
}

// 6. Two polynomials in four variables.
fn several_projective() -> Outcome {
    let v = ["x0", "x1", "x2", "x3"];
    let q = |s: &str| named(s, &v);
    let d = |cs: [&str; 4]| Derivation::new(cs.iter().map(|c| q(c)).collect()).unwrap();
    let fs = vec![q("x0^2 - x1^2"), q("x2^3 + x3^3")];
    let ds = vec![
        d(["x1", "x0", "0", "0"]),
        d(["0", "0", "x3^2", "-x2^2"]),
        d(["3*x0", "3*x1", "2*x2", "2*x3"]),
    ];
    // brute force every 3x3 minor first, then freeze
    let rows: Vec<Vec<Poly>> = (0..4)
        .map(|i| ds.iter().map(|d| d.coeffs()[i].clone()).collect())
        .collect();
    let subsets = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    let brute: Vec<Poly> = subsets
        .iter()
        .map(|s| leibniz_det(&s.map(|r| rows[r].clone()), 4))
        .collect();
    let golden = vec![
        q("3*x3^2*(x0^2 - x1^2)"),
        q("-3*x2^2*(x0^2 - x1^2)"),
        q("2*x1*(x2^3 + x3^3)"),
        q("2*x0*(x2^3 + x3^3)"),
    ];
    ensure!(brute == golden, "brute-force minors {brute:?}");
    let gcd = Poly::gcd_all(brute.iter()).unwrap().unwrap();
    ensure!(gcd.is_one(), "brute-force gcd {gcd}");

    let r = saito_several(&fs, &ds);
    ensure!(r.verdict == Verdict::Free, "verdict {}", r.verdict);
    ensure!(r.minors == golden, "criterion minors differ");
    ensure!(
        r.evidence.as_ref().is_some_and(Poly::is_one),
        "evidence {:?}",
        r.evidence
    );
    Ok("free; four minors match brute force, gcd 1".into())
}

// 7. Affine version with the corrected δ2; the printed δ2 is incompatible.
fn several_affine() -> Outcome {
    let fs = vec![p("x^2 - y^2", 3), p("z^3 + 1", 3)];
    let d1 = der(&["y", "x", "0"], 3);
    let corrected = der(&["3*x*z^2", "3*y*z^2", "2*(z^3 + 1)"], 3);
    let printed = der(&["x*z^2", "y*z^2", "-(z^3 - 1)"], 3);

    let r = saito_several(&fs, &[d1.clone(), corrected]);
    ensure!(
        r.verdict == Verdict::Free,
        "corrected: verdict {}",
        r.verdict
    );

    let c = pairwise_compatibility(&printed, &fs).unwrap();
    ensure!(!c.holds(), "printed δ2 passes the relation");
    let defect = &c.defects[0].1;
    let expected = p("z^2*(x^2 - y^2)*(5*z^3 - 1)", 3);
    ensure!(*defect == expected, "defect {defect}");
    let r = saito_several(&fs, &[d1, printed]);
    ensure!(
        r.verdict == Verdict::InvalidInput,
        "printed: verdict {}",
        r.verdict
    );
    Ok(format!("corrected free; printed defect {defect}"))
}

// 8. Cramer membership on random combinations and perturbations.
fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0_7ac1e);
    let mut instances = vec![affine_conic(), parabola(), conic_tangent()];
    instances.extend((1..=5).map(reflection));
    for inst in &instances {
        let r = saito_classic(&inst.f, &inst.basis);
        ensure!(r.is_free(), "{}: not free", inst.name);
        let n = inst.basis.len();
        for (i, b) in inst.basis.iter().enumerate() {
            let c = membership(b, &inst.basis, &inst.f).map_err(|e| e.to_string())?;
            let unit: Vec<Poly> = (0..n)
                .map(|j| if i == j { Poly::one(n) } else { Poly::zero(n) })
                .collect();
            ensure!(c == unit, "{}: basis element {i} -> {c:?}", inst.name);
        }
    }
    let mut combos = 0;
    let mut perturbed = 0;
    for k in 0..100 {
        let inst = &instances[k % instances.len()];
        let n = inst.basis.len();
        let coeffs: Vec<Poly> = (0..n).map(|_| random_poly(&mut rng, n, 2, 3)).collect();
        let terms: Vec<(Poly, Derivation)> = coeffs
            .iter()
            .cloned()
            .zip(inst.basis.iter().cloned())
            .collect();
        let d = Derivation::combination(&terms).unwrap();
        let got = membership(&d, &inst.basis, &inst.f)
            .map_err(|e| format!("{} combo {k}: {e}", inst.name))?;
        ensure!(got == coeffs, "{} combo {k}: wrong coefficients", inst.name);
        combos += 1;

        // a nonzero constant multiple of ∂_v never lies in Der(f)
        let v = rng.random_range(0..n);
        let c = ratio(rng.random_range(1..=9), rng.random_range(1..=4));
        let bad = d.add(&Derivation::partial(n, v).scale(&c));
        let tangent = tangency(&bad, &inst.f).unwrap().is_tangent();
        let member = membership(&bad, &inst.basis, &inst.f).is_ok();
        ensure!(
            !tangent && !member,
            "{} perturbation {k} accepted",
            inst.name
        );
        perturbed += 1;
    }
    within(start, Duration::from_secs(60), "oracle checks")?;
    Ok(format!(
        "{} bases, {combos} combinations recovered, {perturbed} perturbations rejected in {:?}",
        instances.len(),
        start.elapsed()
    ))
}

// 9. Property suites with fixed seeds.
fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9_0000);
    let cases = 1000;
    for k in 0..cases {
        let a = random_poly(&mut rng, 3, 3, 4);
        let b = random_poly(&mut rng, 3, 3, 4);
        let c = random_poly(&mut rng, 3, 3, 4);
        ensure!(
            &a + &b == &b + &a && &a * &b == &b * &a,
            "commutativity case {k}"
        );
        ensure!(&(&a * &b) * &c == &a * &(&b * &c), "associativity case {k}");
        ensure!(
            &a * &(&b + &c) == &(&a * &b) + &(&a * &c),
            "distributivity case {k}"
        );
        ensure!(
            (&a + &(-&a)).is_zero() && &a * &Poly::one(3) == a,
            "identities case {k}"
        );
        if !b.is_zero() {
            ensure!(
                (&a * &b).exact_divide(&b).as_ref() == Ok(&a),
                "exact_divide case {k}"
            );
        }
        let v = k % 3;
        let lhs = (&a * &b).partial_derivative(v).unwrap();
        let rhs =
            &(&a.partial_derivative(v).unwrap() * &b) + &(&a * &b.partial_derivative(v).unwrap());
        ensure!(lhs == rhs, "Leibniz case {k}");
        let deg = (k % 5) as u32;
        let h = random_homogeneous(&mut rng, 3, deg, 4);
        ensure!(
            euler_derivation(3).apply(&h).unwrap() == h.scale(&rat(deg as i64)),
            "Euler case {k}"
        );
        let g1 = random_poly(&mut rng, 2, 2, 3);
        let g2 = random_poly(&mut rng, 2, 2, 3);
        let common = random_poly(&mut rng, 2, 2, 2);
        let (u, w) = (&g1 * &common, &g2 * &common);
        if !u.is_zero() || !w.is_zero() {
            let g = u.gcd(&w).unwrap();
            ensure!(g.divides(&u) && g.divides(&w), "gcd divisibility case {k}");
            ensure!(
                common.is_zero() || common.divides(&g),
                "gcd misses common factor case {k}"
            );
        }
    }
    for k in 0..120 {
        let size = 1 + k % 4;
        let rows = random_matrix(&mut rng, size, 3, 2);
        let m = PolyMatrix::from_rows(rows.clone()).unwrap();
        ensure!(
            m.determinant_bareiss().unwrap() == leibniz_det(&rows, 3),
            "Bareiss case {k}"
        );
    }
    let bases = [affine_conic(), parabola(), conic_tangent(), reflection(1)];
    let mut lemma = 0;
    let mut k = 0;
    while lemma < 100 {
        let inst = &bases[k % bases.len()];
        k += 1;
        let n = inst.basis.len();
        let g = random_matrix(&mut rng, n, n, 1);
        let ds = combine(&g, &inst.basis);
        match divisibility_lemma_check(&inst.f, &ds) {
            Ok(q) => {
                let det = PolyMatrix::from_columns(
                    &ds.iter().map(|d| d.coeffs().to_vec()).collect::<Vec<_>>(),
                )
                .unwrap()
                .determinant()
                .unwrap();
                ensure!(&q * &inst.f == det, "lemma quotient case {k}");
                lemma += 1;
            }
            Err(logder_core::LemmaError::Dependent) => {}
            Err(e) => return Err(format!("lemma case {k}: {e}")),
        }
    }
    Ok(format!(
        "{cases} cases per algebraic law, 120 determinants, {lemma} tangent families"
    ))
}

// 10. Search oracle on the affine conic.
fn search_oracle() -> Outcome {
    let f = affine_conic().f;
    let target = der(&["2*y", "-(2*x + 1)"], 2);
    let r =
        solve(&SearchProblem::new(SearchMode::Tangent(f.clone()), 1)).map_err(|e| e.to_string())?;
    ensure!(r.contains(&target), "2y∂x - (2x+1)∂y not found");
    let mut dims = Vec::new();
    for d in 0..=3 {
        let r = solve(&SearchProblem::new(SearchMode::Tangent(f.clone()), d))
            .map_err(|e| e.to_string())?;
        for b in &r.basis {
            ensure!(
                tangency(b, &f).unwrap().is_tangent(),
                "d = {d}: non-tangent basis element"
            );
        }
        dims.push(r.solution_dimension);
    }
    ensure!(dims.windows(2).all(|w| w[0] <= w[1]), "dimensions {dims:?}");
    Ok(format!("dimensions {dims:?} for d = 0..3"))
}

fn main() {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, affine_conic_basis),
        (2, reflection_arrangements),
        (3, conic_tangent_line),
        (4, negative_control),
        (5, multiderivations),
        (6, several_projective),
        (7, several_affine),
        (8, oracle_equivalence),
        (9, property_suites),
        (10, search_oracle),
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (n, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {n}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {n}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 10 criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}

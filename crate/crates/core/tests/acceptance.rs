//! Acceptance suite: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ramification::classify::{is_galois, ClassificationRequest};
use ramification::eisenstein::{l_equiv, vp, EisensteinPoly, Rat};
use ramification::ext_arith::minpoly_uniformizer;
use ramification::fixtures;
use ramification::local_field::{ExtInt, LocalField};
use ramification::reduce::{perturb, perturb_predict, reduce_to_standard};
use ramification::sampling::{random_eisenstein, random_element, random_field, random_uniformizer_expr};
use ramification::standard_form::StandardForm;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn finite(v: &[ExtInt]) -> Option<Vec<u64>> {
    v.iter().map(|i| i.finite()).collect()
}

fn classification_listing() -> Outcome {
    let start = Instant::now();
    let k = fixtures::q3_zeta8(12);
    let rf = k.residue();
    let forms: Vec<StandardForm> = ClassificationRequest::new(&k, 2, 8).enumerate().map_err(|e| e.to_string())?.collect();
    ensure(forms.len() == 16, || format!("{} forms", forms.len()))?;
    let minus_one = rf.from_int(-1);
    let three = k.from_int(3);
    let mut gammas = BTreeSet::new();
    let mut omegas = BTreeSet::new();
    for sf in &forms {
        let f = sf.render();
        for e in 1..8 {
            ensure(f.x_coeff(e).is_zero(), || format!("nonzero X^{e} in {}", f.render()))?;
        }
        let gamma = sf.gamma.clone().ok_or("gamma missing")?;
        let constant = three.mul(&k.one().add(&three.mul(&k.teich(&gamma)))).neg();
        ensure(f.x_coeff(0) == constant, || format!("constant term of {}", f.render()))?;
        if sf.omega == minus_one {
            // X^9 + 3 X^8 - 3 (1 + 3 gamma)
            ensure(f.x_coeff(8) == three, || format!("X^8 coefficient of {}", f.render()))?;
            gammas.insert(gamma);
        } else {
            // X^9 - 3 omega X^8 - 3
            ensure(gamma.is_zero(), || format!("gamma = {gamma} for omega = {}", sf.omega))?;
            ensure(f.x_coeff(8) == three.mul(&k.teich(&sf.omega)).neg(), || format!("X^8 coefficient of {}", f.render()))?;
            omegas.insert(sf.omega.clone());
        }
    }
    ensure(gammas.len() == 9, || format!("{} values of gamma for omega = -1", gammas.len()))?;
    ensure(omegas.len() == 7, || format!("{} values of omega != -1", omegas.len()))?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {elapsed:?}"))?;
    Ok(format!("16 forms (9 with omega = -1, 7 with gamma = 0) in {elapsed:.2?}"))
}

fn galois_split() -> Outcome {
    let k = fixtures::q3_zeta8(12);
    let minus_one = k.residue().from_int(-1);
    let mut galois = 0;
    for sf in fixtures::q3_zeta8_forms(&k) {
        let g = is_galois(&sf);
        ensure(g.galois == (sf.omega == minus_one), || format!("omega = {} flagged {}", sf.omega, g.galois))?;
        if g.galois {
            ensure(g.group.as_deref() == Some("(Z/3Z)^2"), || format!("group {:?}", g.group))?;
            galois += 1;
        }
    }
    ensure(galois == 9, || format!("{galois} Galois forms"))?;
    Ok("9 Galois with group (Z/3Z)^2, 7 not Galois".into())
}

fn fixture_indices() -> Outcome {
    let k = fixtures::q3_zeta8(12);
    let got = |f: EisensteinPoly| finite(&f.indices().map_err(|e| e.to_string())?.idx).ok_or_else(|| "infinite index".to_string());
    let a = got(fixtures::three_index_nonic(&k))?;
    let b = got(fixtures::sextic(&k))?;
    let c = got(fixtures::same_indices_nonic(&k))?;
    ensure(a == [7, 3, 0], || format!("nonic {a:?}"))?;
    ensure(b == [4, 0], || format!("sextic {b:?}"))?;
    // p = 3, b_1 = 6, A_1 = 1, e_K = 1: (p^2 (A_1 + e_K) - b_1, p^2 A_1 - b_1, 0)
    let closed = [9 * (1 + 1) - 6, 9 - 6, 0];
    ensure(c == closed, || format!("same-index nonic {c:?}, closed form {closed:?}"))?;
    Ok(format!("{a:?}, {b:?}, {c:?}"))
}

/// Degrees with their residue characteristic, covering `n = p^k` and `n = u p^k`.
const DEGREES: [(u64, usize); 9] = [(2, 4), (2, 8), (2, 6), (2, 12), (3, 9), (3, 3), (3, 6), (5, 5), (5, 10)];

fn random_case_field(rng: &mut ChaCha8Rng, p: u64, precision: u32) -> LocalField {
    loop {
        let k = random_field(rng, precision);
        if k.p() == p {
            return k;
        }
    }
}

fn perturbation_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0004);
    let (mut cases, mut composite, mut attempts) = (0, 0, 0);
    while cases < 100 {
        attempts += 1;
        ensure(attempts < 5000, || format!("only {cases} usable cases"))?;
        let (p, n) = DEGREES[rng.gen_range(0..DEGREES.len())];
        let k = random_case_field(&mut rng, p, 10);
        let f = random_eisenstein(&mut rng, &k, n, 0.5);
        let Ok(prof) = f.indices() else { continue };
        if finite(&prof.idx).is_none() {
            continue;
        }
        let ell = rng.gen_range(1..=3u64);
        let js: Vec<u32> = (0..=prof.k)
            .filter(|&j| {
                let phi = prof.phi_j(j, Rat::from_integer(ell as i64)).unwrap().to_integer() as u64;
                vp(phi, p).min(prof.k) == j
            })
            .collect();
        if js.is_empty() {
            continue;
        }
        let j = js[rng.gen_range(0..js.len())];
        let r = random_element(&mut rng, &k, 0, 0.6);
        let pred = perturb_predict(&f, &prof, ell, &r, j).map_err(|e| e.to_string())?;
        let Ok(g) = perturb(&f, ell, &r) else { continue };
        let actual = g.coeff(pred.h);
        let m = pred.t as u32 + 1;
        if actual.prec() < m || pred.value.prec() < m {
            continue;
        }
        ensure(pred.value.eq_mod(&actual, m), || {
            format!("n = {n}, l = {ell}, j = {j}, h = {}, t = {}: predicted {} got {}\n f = {}", pred.h, pred.t, pred.value, actual, f.render())
        })?;
        cases += 1;
        if prof.u > 1 {
            composite += 1;
        }
    }
    ensure(composite > 0, || "no n = u p^k case with u > 1".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("100 cases ({composite} with u > 1) in {elapsed:.2?}"))
}

fn stability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0005);
    let (mut cases, mut attempts) = (0, 0);
    while cases < 100 {
        attempts += 1;
        ensure(attempts < 5000, || format!("only {cases} usable cases"))?;
        let (p, n) = DEGREES[rng.gen_range(0..DEGREES.len())];
        let k = random_case_field(&mut rng, p, 10);
        let f = random_eisenstein(&mut rng, &k, n, 0.5);
        match f.indices() {
            Ok(prof) if finite(&prof.idx).is_some() => {}
            _ => continue,
        }
        let ell = rng.gen_range(1..=4u64);
        let r = random_element(&mut rng, &k, 0, 0.6);
        let Ok(g) = perturb(&f, ell, &r) else { continue };
        match l_equiv(&f, &g, ell) {
            Ok(true) => cases += 1,
            Ok(false) => return Err(format!("l = {ell}, r = {r}: {} vs {}", f.render(), g.render())),
            Err(_) => continue,
        }
    }
    Ok(format!("100 perturbations ({attempts} drawn)"))
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0006);
    let q = fixtures::q3_zeta8(12);
    let t = fixtures::f3_laurent(16);
    let forms: Vec<StandardForm> = fixtures::q3_zeta8_forms(&q).into_iter().chain(fixtures::laurent_forms(&t)).collect();
    for sf in &forms {
        let f = sf.render();
        for _ in 0..5 {
            let expr = random_uniformizer_expr(&mut rng, &sf.field, 4);
            let g = minpoly_uniformizer(&f, &expr).map_err(|e| e.to_string())?;
            let (out, _) = reduce_to_standard(&g, None).map_err(|e| format!("{}: {e}", g.render()))?;
            let (a, b) = (out.to_json().to_string(), sf.to_json().to_string());
            ensure(a == b, || format!("{} reduced to {a}, expected {b}", g.render()))?;
        }
    }
    Ok(format!("{} forms x 5 scrambles recovered in {:.2?}", forms.len(), start.elapsed()))
}

fn invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0007);
    let (mut cases, mut attempts, mut changes) = (0, 0, 0);
    while cases < 500 {
        attempts += 1;
        ensure(attempts < 20000, || format!("only {cases} usable polynomials"))?;
        let (p, n) = DEGREES[rng.gen_range(0..DEGREES.len())];
        let k = random_case_field(&mut rng, p, 10);
        let f = random_eisenstein(&mut rng, &k, n, 0.5);
        let Ok(prof) = f.indices() else { continue };
        let Some(idx) = finite(&prof.idx) else { continue };
        let kk = prof.k as usize;
        ensure(idx[kk] == 0 && (kk == 0 || idx[kk - 1] > 0), || format!("ordering at the top: {idx:?}"))?;
        ensure(idx.windows(2).all(|w| w[0] >= w[1]), || format!("ordering {idx:?}"))?;
        if let Some(two) = &prof.two_index {
            if prof.k >= 2 {
                ensure(prof.tilde == prof.idx, || format!("tilde {:?} != {idx:?}", prof.tilde))?;
                if let ExtInt::Fin(e) = prof.e_k {
                    ensure(two.i0 < p.pow(prof.k) * e, || format!("i0 = {} too large", two.i0))?;
                }
            }
        }
        if attempts % 5 == 0 {
            let expr = random_uniformizer_expr(&mut rng, &k, 3);
            if let Ok(g) = minpoly_uniformizer(&f, &expr) {
                if let Ok(gp) = g.indices() {
                    ensure(gp.idx == prof.idx, || format!("indices changed under {}: {:?} -> {:?}", f.render(), prof.idx, gp.idx))?;
                    changes += 1;
                }
            }
        }
        cases += 1;
    }
    ensure(changes >= 50, || format!("only {changes} uniformizer changes"))?;
    Ok(format!("500 polynomials, {changes} uniformizer changes"))
}

fn term_counts() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7e57_0008);
    let k = fixtures::q3_zeta8(8);
    let nonic = fixtures::three_index_nonic(&k);
    let sextic = fixtures::sextic(&k);
    let (mut min9, mut min6) = (usize::MAX, usize::MAX);
    for _ in 0..200 {
        let expr = random_uniformizer_expr(&mut rng, &k, 3);
        let g9 = minpoly_uniformizer(&nonic, &expr).map_err(|e| e.to_string())?;
        let g6 = minpoly_uniformizer(&sextic, &expr).map_err(|e| e.to_string())?;
        min9 = min9.min(g9.term_count());
        min6 = min6.min(g6.term_count());
        ensure(g9.term_count() >= 5, || format!("{} has {} terms", g9.render(), g9.term_count()))?;
        ensure(g6.term_count() >= 4, || format!("{} has {} terms", g6.render(), g6.term_count()))?;
    }
    Ok(format!("200 uniformizers: at least {min9} terms (degree 9), {min6} terms (degree 6)"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("classification of k = 2, i0 = 8 over Q_3(zeta_8)", classification_listing),
        ("Galois split of the 16 forms", galois_split),
        ("indices of the fixed examples", fixture_indices),
        ("perturbation prediction vs minimum polynomial", perturbation_oracle),
        ("stability under perturbation", stability),
        ("standard form round trip", round_trip),
        ("index invariants", invariants),
        ("term counts under uniformizer changes", term_counts),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}: {name} ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {}: {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}

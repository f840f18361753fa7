//! End-to-end checks of the built-in worked examples.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ramification::classify::is_galois;
use ramification::eisenstein::EisensteinPoly;
use ramification::ext_arith::minpoly_uniformizer;
use ramification::fixtures;
use ramification::reduce::{perturb, perturb_predict};
use ramification::sampling::{random_nonzero_residue, random_residue, random_uniformizer_expr};

const SAMPLES: usize = 50;

fn indices_of(f: &EisensteinPoly) -> Result<Vec<String>, String> {
    let prof = f.indices().map_err(|e| e.to_string())?;
    Ok(prof.idx.iter().map(|i| i.to_string()).collect())
}

fn expect_indices(f: &EisensteinPoly, want: &[u64]) -> Result<String, String> {
    let got = indices_of(f)?;
    let want: Vec<String> = want.iter().map(u64::to_string).collect();
    if got == want {
        Ok(format!("({})", got.join(", ")))
    } else {
        Err(format!("got ({}), expected ({})", got.join(", "), want.join(", ")))
    }
}

fn min_terms(f: &EisensteinPoly, rng: &mut ChaCha8Rng, bound: usize) -> Result<String, String> {
    let mut least = usize::MAX;
    for _ in 0..SAMPLES {
        let g = minpoly_uniformizer(f, &random_uniformizer_expr(rng, f.field(), 3)).map_err(|e| e.to_string())?;
        least = least.min(g.term_count());
    }
    if least >= bound {
        Ok(format!("at least {least} terms over {SAMPLES} uniformizers"))
    } else {
        Err(format!("found a minimum polynomial with {least} < {bound} terms"))
    }
}

/// Prints one row per check and returns whether all passed.
pub fn run(seed: u64) -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = fixtures::q3_zeta8(12);
    let rf = k.residue().clone();
    let minus_one = rf.from_int(-1);
    let forms = fixtures::q3_zeta8_forms(&k);
    let nonic = fixtures::three_index_nonic(&k);
    let sextic = fixtures::sextic(&k);

    let mut rows: Vec<(&str, Result<String, String>)> = Vec::new();
    rows.push(("classify Q_3(zeta_8), k = 2, i0 = 8", {
        let special = forms.iter().filter(|sf| sf.omega == minus_one).count();
        if forms.len() == 16 && special == 9 {
            Ok("16 forms, 9 with omega = -1".into())
        } else {
            Err(format!("{} forms, {special} with omega = -1", forms.len()))
        }
    }));
    rows.push(("Galois forms among them", {
        let flagged: Vec<bool> = forms.iter().map(|sf| is_galois(sf).galois).collect();
        let agree = forms.iter().zip(&flagged).all(|(sf, &g)| g == (sf.omega == minus_one));
        let count = flagged.iter().filter(|&&g| g).count();
        if agree && count == 9 {
            Ok("exactly the 9 forms with omega = -1, group (Z/3Z)^2".into())
        } else {
            Err(format!("{count} flagged"))
        }
    }));
    rows.push(("indices of X^9 + pi X^7 - pi X^6 + pi X^3 - pi", expect_indices(&nonic, &[7, 3, 0])));
    rows.push(("first-order perturbations of that nonic", {
        let prof = nonic.indices().expect("fixture indices");
        let mut result = Ok(format!("{SAMPLES} samples match at j = 0 and j = 1"));
        for _ in 0..SAMPLES {
            let r0 = k.teich(&random_nonzero_residue(&mut rng, &rf));
            let r1 = k.teich(&random_residue(&mut rng, &rf));
            let mut expr = std::collections::BTreeMap::new();
            expr.insert(1, r0.clone());
            let scaled = minpoly_uniformizer(&nonic, &ramification::literal::XPoly { terms: expr, cap: None })
                .expect("scaled uniformizer");
            let sprof = scaled.indices().expect("indices are invariant");
            let actual = perturb(&scaled, 1, &r1).expect("perturbed uniformizer");
            let pi = k.pi();
            let c1 = r1.mul(&r0.pow(2)).mul(&pi);
            let c3 = r0.pow(3).mul(&pi).add(&r1.pow(3).mul(&r0.pow(6)).mul(&pi));
            let ok = [(0, 1usize, c1), (1, 3, c3)].into_iter().all(|(j, h, want)| {
                perturb_predict(&scaled, &sprof, 1, &r1, j).is_ok_and(|p| p.h == h && p.value.eq_mod(&want, 2))
                    && actual.coeff(h).eq_mod(&want, 2)
            });
            if !ok || sprof.idx != prof.idx {
                result = Err("a sampled perturbation disagrees".into());
                break;
            }
        }
        result
    }));
    rows.push(("term counts of other uniformizers of the nonic", min_terms(&nonic, &mut rng, 5)));
    rows.push(("indices of X^6 - pi X^5 + pi X^4 + pi", expect_indices(&sextic, &[4, 0])));
    rows.push(("term counts of other uniformizers of the sextic", min_terms(&sextic, &mut rng, 4)));
    rows.push(("same indices for X^9 - pi^2 X^4 + pi X^3 - pi and X^9 + pi X^3 - pi", {
        let f = expect_indices(&fixtures::same_indices_nonic(&k), &[12, 3, 0]);
        let g = expect_indices(&fixtures::same_indices_trinomial(&k), &[12, 3, 0]);
        f.and(g)
    }));

    let width = rows.iter().map(|(name, _)| name.len()).max().unwrap_or(0);
    let mut all = true;
    for (name, result) in &rows {
        let (tag, detail) = match result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                all = false;
                ("FAIL", d)
            }
        };
        println!("{tag}  {name:<width$}  {detail}");
    }
    all
}

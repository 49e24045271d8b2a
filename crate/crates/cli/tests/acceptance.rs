//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use symspace::algebra::{
    format_poly, hilbert_function, is_complete_intersection, parse_poly, Algebra, FieldSpec, Generator, Poly,
    Presentation, Relation,
};
use symspace::catalog::{check, instantiate, Catalog, FamilyId, Params};
use symspace::steenrod::{char_class_operation, operation_component, Group, Operation, TorusModel, TorusPoly};
use symspace::sullivan::{build_formal_model, check_d_squared};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn symspace(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_symspace")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn full_report() -> Result<(Value, Duration), String> {
    let start = Instant::now();
    let (code, stdout) = symspace(&["report", "--all", "--format", "json"]);
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("report --all exited {code}"))?;
    let json = serde_json::from_slice(&stdout).map_err(|e| e.to_string())?;
    Ok((json, elapsed))
}

fn param(row: &Value, key: &str) -> Option<u64> {
    row["params"][key].as_u64()
}

fn criterion_1() -> Outcome {
    let (json, elapsed) = full_report()?;
    let rows = json["rows"].as_array().ok_or("no rows")?;
    let find = |family: &str, m: Option<u64>, n: Option<u64>| {
        rows.iter().find(|r| r["family"] == family && param(r, "m") == m && param(r, "n") == n)
    };
    let mut expected: Vec<(&str, Option<u64>, Option<u64>)> = Vec::new();
    expected.extend((2..=10).map(|n| ("AI", None, Some(n))));
    expected.extend((2..=6).map(|n| ("AII", None, Some(n))));
    for m in 2..=8 {
        expected.extend((2..=m).map(|n| ("BDI", Some(m), Some(n))));
    }
    for m in 1..=6 {
        expected.extend((1..=m).map(|n| ("CII", Some(m), Some(n))));
    }
    for f in ["EI", "EII", "EIV", "EV", "EVI", "EVIII", "EIX", "FI", "FII", "G"] {
        expected.push((f, None, None));
    }
    for &(f, m, n) in &expected {
        let row = find(f, m, n).ok_or_else(|| format!("missing row {f} m={m:?} n={n:?}"))?;
        ensure(row["certified"] == true, || format!("{} has no conclusion", row["space"]))?;
        // AI(2) is SU(2)/SO(2) = CP^1, itself Hermitian.
        let hermitian = (f == "BDI" || f == "AI") && n == Some(2);
        let recorded = row["criterion"] == "recorded-external";
        ensure(hermitian == recorded, || format!("{} concluded by {}", row["space"], row["criterion"]))?;
    }
    for r in
        rows.iter().filter(|r| ["AIII", "DIII", "CI", "EIII", "EVII"].contains(&r["family"].as_str().unwrap_or("")))
    {
        if r["certified"] == true && r["space"] != "AIII(m=1, n=1)" {
            ensure(r["criterion"] == "recorded-external", || {
                format!("{} concluded by {}", r["space"], r["criterion"])
            })?;
        }
    }
    ensure(elapsed < Duration::from_secs(60), || format!("report took {elapsed:?}"))?;
    Ok(format!("{} listed rows concluded in {:.2?}", expected.len(), elapsed))
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("symspace-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn criterion_2() -> Outcome {
    let (json, _) = full_report()?;
    let rows = json["rows"].as_array().ok_or("no rows")?;
    let row = |space: &str| rows.iter().find(|r| r["space"] == space).ok_or(format!("missing {space}"));
    let cp3 = row("AIII(m=1, n=3)")?;
    ensure(cp3["certified"] == false, || "CP^3 certified".into())?;
    ensure(cp3["exception"].is_string(), || "CP^3 not flagged as the known exception".into())?;
    let (code, _) = symspace(&["check", "AIII", "--m", "1", "--n", "3"]);
    ensure(code == 2, || format!("check AIII(1,3) exited {code}"))?;

    let cp2 = row("AIII(m=1, n=2)")?;
    let rational_refused = cp2["attempts"]
        .as_array()
        .is_some_and(|a| a.iter().any(|s| s.as_str().is_some_and(|s| s.starts_with("rational:"))));
    ensure(rational_refused, || "CP^2 has no recorded rational refusal".into())?;
    let file = write_temp("cp2.pres", "presentation/1\nfield Q\ngen x2 2 polynomial\nrel 6 explicit [3]:1\nfdim 4\n");
    let (code, _) = symspace(&["model", file.to_str().unwrap()]);
    ensure(code == 2, || format!("rational checker on Q[x2]/(x2^3) exited {code}"))?;
    Ok("CP^3 flagged, CP^2 refused by the rational checker".into())
}

/// `C(n, k) mod 2` by Lucas, with `C(-1, 0) = 1`.
fn binom2(n: i64, k: i64) -> bool {
    k == 0 || (n >= k && (n & k) == k)
}

fn wu(model: &TorusModel, n: u32, i: u32, j: u32) -> Poly {
    let alg = model.class_algebra();
    let mut out = alg.zero();
    for t in 0..=i {
        let (lo, hi) = (i - t, j + t);
        if lo == 1 || hi > n || !binom2(j as i64 - i as i64 + t as i64 - 1, t as i64) {
            continue;
        }
        let (lo_name, hi_name) = (format!("w{lo}"), format!("w{hi}"));
        let factors: Vec<(&str, u32)> = match lo {
            0 => vec![(&hi_name, 1)],
            _ if lo == hi => vec![(&hi_name, 2)],
            _ => vec![(&lo_name, 1), (&hi_name, 1)],
        };
        let m = alg.monomial_from_names(&factors).unwrap();
        out = alg.add(&out, &alg.term(m, BigRational::from_integer(BigInt::from(1))));
    }
    out
}

fn criterion_3() -> Outcome {
    let mut checked = 0;
    for n in 2..=8u32 {
        let so = TorusModel::new(Group::SpecialOrthogonal, n as usize, 2).map_err(|e| e.to_string())?;
        for j in 2..=n {
            for i in 0..=j {
                let got = char_class_operation(&so, &format!("w{j}"), Operation::Sq(i)).map_err(|e| e.to_string())?;
                let want = wu(&so, n, i, j);
                ensure(got == want, || {
                    format!(
                        "n={n}: Sq^{i} w{j} = {}, Wu gives {}",
                        format_poly(so.class_algebra(), &got),
                        format_poly(so.class_algebra(), &want)
                    )
                })?;
                checked += 1;
            }
        }
    }
    for (n, k) in [(4, 2), (7, 2), (8, 2), (5, 3), (6, 3)] {
        let so = TorusModel::new(Group::SpecialOrthogonal, n, 2).unwrap();
        let got = char_class_operation(&so, &format!("w{n}"), Operation::Sq(k)).unwrap();
        let got = format_poly(so.class_algebra(), &got);
        ensure(got == format!("w{k}*w{n}"), || format!("Sq^{k} w{n} = {got}"))?;
    }
    Ok(format!("{checked} squares agree with Wu"))
}

fn coefficient(model: &TorusModel, p: &Poly, factors: &[(&str, u32)]) -> BigRational {
    p.coefficient(&model.class_algebra().monomial_from_names(factors).unwrap())
}

fn criterion_4() -> Outcome {
    for (p, n) in [(3u32, 3usize), (5, 5)] {
        let sp = TorusModel::new(Group::Symplectic, n, p).unwrap();
        let v = char_class_operation(&sp, &format!("q{n}"), Operation::P { k: 1, prime: p }).unwrap();
        let half = (p - 1) / 2;
        let sign: i64 = if half % 2 == 0 { 1 } else { p as i64 - 1 };
        let got = coefficient(&sp, &v, &[(&format!("q{half}"), 1), (&format!("q{n}"), 1)]);
        ensure(got == BigRational::from_integer(sign.into()), || format!("p={p}: coefficient {got}"))?;
    }
    for n in [2usize, 4] {
        let sp = TorusModel::new(Group::Symplectic, n, 2).unwrap();
        let v = char_class_operation(&sp, &format!("q{n}"), Operation::Sq(4)).unwrap();
        let got = coefficient(&sp, &v, &[("q1", 1), (&format!("q{n}"), 1)]);
        ensure(got == BigRational::from_integer(1.into()), || format!("Sq^4 q{n}: coefficient {got}"))?;
    }
    Ok("P^1 at (3,3), (5,5) and Sq^4 at n = 2, 4".into())
}

fn rational(gens: &[(&str, u32)], rels: &[(u32, &str)]) -> Presentation {
    let alg =
        Algebra::new(FieldSpec::rationals(), gens.iter().map(|&(n, d)| Generator::polynomial(n, d)).collect()).unwrap();
    let rels = rels.iter().map(|&(d, s)| Relation::explicit(d, parse_poly(&alg, s).unwrap())).collect();
    Presentation::new(alg, rels, None).unwrap()
}

fn palindromic(h: &[usize]) -> bool {
    h.iter().eq(h.iter().rev())
}

/// A triangular system `x_i^e_i + f_i(x_1..x_{i-1})` with decomposable tails.
fn synthetic_ci(rng: &mut ChaCha8Rng) -> (Presentation, u32) {
    let k = rng.gen_range(1..=3usize);
    let shape: Vec<(u32, u32)> = (0..k).map(|_| (rng.gen_range(1..4), rng.gen_range(2..4))).collect();
    let gens = shape.iter().enumerate().map(|(i, &(h, _))| Generator::polynomial(format!("x{}_{i}", 2 * h), 2 * h));
    let alg = Algebra::new(FieldSpec::rationals(), gens.collect()).unwrap();
    let mut rels = Vec::new();
    for (i, &(h, e)) in shape.iter().enumerate() {
        let deg = 2 * h * e;
        let basis: Vec<_> = alg
            .monomials_of_degree(deg)
            .into_iter()
            .filter(|m| m.word_length() >= 2 && (i..k).all(|j| m.exponent(j) == 0))
            .collect();
        let mut body = alg.pow(&alg.gen(i), e).unwrap();
        for m in basis {
            let c = rng.gen_range(-3i64..=3);
            body = alg.add(&body, &alg.term(m, BigRational::from_integer(c.into())));
        }
        rels.push(Relation::explicit(deg, body));
    }
    let top = shape.iter().map(|&(h, e)| 2 * h * (e - 1)).sum::<u32>();
    (Presentation::new(alg, rels, Some(top.max(1))).unwrap(), top)
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for trial in 0..100 {
        let (pres, top) = synthetic_ci(&mut rng);
        ensure(is_complete_intersection(&pres).unwrap(), || format!("synthetic {trial} rejected"))?;
        let model = build_formal_model(&pres).map_err(|e| e.to_string())?;
        ensure(check_d_squared(&model).unwrap(), || format!("synthetic {trial}: d∘d != 0"))?;
        ensure(palindromic(&hilbert_function(&pres, top).unwrap()), || format!("synthetic {trial} not palindromic"))?;
    }
    let truncated = rational(&[("x2", 2)], &[(8, "x2^4")]);
    let triple = rational(
        &[("x4", 4), ("x6", 6), ("x8", 8)],
        &[(16, "x4^4"), (12, "x6^2 + x4^3"), (16, "x8^2 + x4^2*x8 + x4*x6^2")],
    );
    for (name, pres, top) in [("Q[x2]/(x2^4)", &truncated, 6), ("regular triple", &triple, 26)] {
        ensure(is_complete_intersection(pres).unwrap(), || format!("{name} rejected"))?;
        ensure(palindromic(&hilbert_function(pres, top).unwrap()), || format!("{name} not palindromic"))?;
        ensure(check_d_squared(&build_formal_model(pres).unwrap()).unwrap(), || format!("{name}: d∘d != 0"))?;
    }
    let nested = rational(&[("x4", 4), ("x8", 8)], &[(8, "x4^2"), (12, "x4^3")]);
    ensure(!is_complete_intersection(&nested).unwrap(), || "(x4^2, x4^3) accepted".into())?;
    Ok("100 synthetic models plus the fixed cases".into())
}

fn criterion_6() -> Outcome {
    let catalog = Catalog::embedded().map_err(|e| e.to_string())?;
    let ai7 = instantiate(&catalog, FamilyId::AI, Params::n(7)).map_err(|e| e.to_string())?;
    let out = check(&ai7).map_err(|e| e.to_string())?;
    let cert = out.verdict.certificate().ok_or("AI(7) not certified")?;
    let entry =
        cert.transcript().entries().iter().find(|e| e.check == "condition (6)").ok_or("no condition (6) entry")?;
    for needle in ["Sq^2", "ΣRP^6 × ΣRP^1", "Σu^4⊗Σu^1", "Σu^6⊗1"] {
        ensure(entry.outcome.contains(needle), || format!("condition (6) entry lacks {needle}: {}", entry.outcome))?;
    }
    let s = ai7.steenrod_instance().ok_or("no Steenrod instance")?;
    let fact = ["Σu^4", "Σu^6"]
        .into_iter()
        .find(|c| s.alpha.model.entries().any(|(k, op, _)| k == *c && op == Operation::Sq(2)))
        .ok_or("no recorded Sq^2 fact in degree 7")?;
    let mut mutated = s.clone();
    mutated.alpha.model = s.alpha.model.without_entry(fact, Operation::Sq(2)).map_err(|e| e.to_string())?;
    let mutated = ai7.with_steenrod_instance(mutated).ok_or("mutation not accepted")?;
    let verdict = check(&mutated).map_err(|e| e.to_string())?.verdict;
    let refusal = verdict.refusal().ok_or("mutated run still certifies")?;
    ensure(refusal.failed_hypothesis.starts_with("condition (6)"), || {
        format!("mutated run failed elsewhere: {}", refusal.failed_hypothesis)
    })?;
    Ok(format!("basis enumerated; deleting Sq^2 on {fact} flips to a refusal"))
}

fn random_torus(rng: &mut ChaCha8Rng, nvars: usize, degree: u32) -> TorusPoly {
    let terms = (0..rng.gen_range(1..=5)).map(|_| {
        let mut left = degree;
        let mut exps = vec![0; nvars];
        for e in exps.iter_mut().take(nvars - 1) {
            *e = rng.gen_range(0..=left);
            left -= *e;
        }
        exps[nvars - 1] = left;
        (exps, 1)
    });
    TorusPoly::from_terms(nvars, 2, terms)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sq = |p: &TorusPoly, k: u32| operation_component(p, Operation::Sq(k), 1).map_err(|e| e.to_string());
    for trial in 0..1000 {
        let nvars = rng.gen_range(1..=4);
        let d = rng.gen_range(0..=8);
        let e = rng.gen_range(0..=8 - d);
        let f = random_torus(&mut rng, nvars, d);
        let g = random_torus(&mut rng, nvars, e);
        ensure(sq(&f, 0)? == f, || format!("trial {trial}: Sq^0 f != f"))?;
        ensure(sq(&f, d)? == f.mul(&f), || format!("trial {trial}: Sq^{d} f != f^2"))?;
        ensure(sq(&f, d + 1)?.is_zero(), || format!("trial {trial}: Sq^{} f != 0", d + 1))?;
        let fg = f.mul(&g);
        for k in 0..=(d + e) {
            let mut cartan = TorusPoly::zero(nvars, 2);
            for i in 0..=k {
                cartan = cartan.add(&sq(&f, i)?.mul(&sq(&g, k - i)?));
            }
            ensure(sq(&fg, k)? == cartan, || format!("trial {trial}: Cartan fails at Sq^{k}"))?;
        }
    }
    Ok("1000 random polynomials".into())
}

fn criterion_8() -> Outcome {
    let (c1, a) = symspace(&["report", "--all", "--format", "json"]);
    let (c2, b) = symspace(&["report", "--all", "--format", "json"]);
    ensure(c1 == 0 && c2 == 0, || format!("exit codes {c1}, {c2}"))?;
    ensure(a == b, || "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("full report concludes every listed row", criterion_1),
        ("CP^3 and CP^2 negative controls", criterion_2),
        ("Wu formula oracle", criterion_3),
        ("odd-primary and Sq^4 coefficients", criterion_4),
        ("Sullivan model well-formedness", criterion_5),
        ("condition (6) computed and mutation-sensitive", criterion_6),
        ("Steenrod engine properties", criterion_7),
        ("deterministic report output", criterion_8),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {}: {name} ({detail})", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {}: {name}: {why}", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}

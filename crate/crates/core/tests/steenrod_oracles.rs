use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use symspace::algebra::{format_poly, Poly};
use symspace::catalog::aii_square_table;
use symspace::steenrod::{
    char_class_operation, check_symmetric, express_symmetric, operation_component, total_operation_on_torus, Group,
    Operation, SuspensionModel, TorusModel, TorusPoly,
};

/// `C(n, k) mod 2` by Lucas, with `C(-1, 0) = 1`.
fn binom2(n: i64, k: i64) -> bool {
    if k == 0 {
        return true;
    }
    n >= k && (n & k) == k
}

/// Wu's formula `Sq^i w_j = sum_t C(j-i+t-1, t) w_{i-t} w_{j+t}` in
/// `H*(BSO(n); Z2)`, where `w_0 = 1`, `w_1 = 0` and `w_k = 0` for `k > n`.
fn wu(model: &TorusModel, n: u32, i: u32, j: u32) -> Poly {
    let alg = model.class_algebra();
    let mut out = alg.zero();
    for t in 0..=i {
        let (lo, hi) = (i - t, j + t);
        if lo == 1 || hi > n || !binom2(j as i64 - i as i64 + t as i64 - 1, t as i64) {
            continue;
        }
        let hi_name = format!("w{hi}");
        let lo_name = format!("w{lo}");
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

#[test]
fn stiefel_whitney_squares_match_wu() {
    for n in 2..=8u32 {
        let so = TorusModel::new(Group::SpecialOrthogonal, n as usize, 2).unwrap();
        for j in 2..=n {
            for i in 0..=j {
                let got = char_class_operation(&so, &format!("w{j}"), Operation::Sq(i)).unwrap();
                let want = wu(&so, n, i, j);
                assert_eq!(
                    got,
                    want,
                    "n={n}: Sq^{i} w{j} = {} but Wu gives {}",
                    format_poly(so.class_algebra(), &got),
                    format_poly(so.class_algebra(), &want)
                );
            }
        }
    }
}

#[test]
fn case_split_squares() {
    for (n, k) in [(4, 2), (7, 2), (8, 2), (5, 3), (6, 3)] {
        let so = TorusModel::new(Group::SpecialOrthogonal, n, 2).unwrap();
        let got = char_class_operation(&so, &format!("w{n}"), Operation::Sq(k)).unwrap();
        assert_eq!(format_poly(so.class_algebra(), &got), format!("w{k}*w{n}"), "Sq^{k} w{n}");
    }
}

fn coefficient(model: &TorusModel, p: &Poly, factors: &[(&str, u32)]) -> BigRational {
    let m = model.class_algebra().monomial_from_names(factors).unwrap();
    p.coefficient(&m)
}

#[test]
fn odd_primary_linear_coefficients() {
    for (p, n) in [(3u32, 3usize), (5, 5)] {
        let sp = TorusModel::new(Group::Symplectic, n, p).unwrap();
        let v = char_class_operation(&sp, &format!("q{n}"), Operation::P { k: 1, prime: p }).unwrap();
        let half = format!("q{}", (p - 1) / 2);
        let top = format!("q{n}");
        let sign = if ((p - 1) / 2) % 2 == 0 { 1 } else { p as i64 - 1 };
        assert_eq!(coefficient(&sp, &v, &[(&half, 1), (&top, 1)]), BigRational::from_integer(sign.into()));
    }
    for n in [2usize, 4] {
        let sp = TorusModel::new(Group::Symplectic, n, 2).unwrap();
        let v = char_class_operation(&sp, &format!("q{n}"), Operation::Sq(4)).unwrap();
        let top = format!("q{n}");
        assert_eq!(coefficient(&sp, &v, &[("q1", 1), (&top, 1)]), BigRational::from_integer(1.into()));
    }
}

/// The linear part of `Sq^{2j} c_k` is `C(k-1, j) c_{k+j}`.
#[test]
fn chern_linear_parts_match_closed_formula() {
    for r in 2..=7usize {
        let su = TorusModel::new(Group::SpecialUnitary, r, 2).unwrap();
        for k in 2..=r as u32 {
            for j in 0..=k {
                let v = char_class_operation(&su, &format!("c{k}"), Operation::Sq(2 * j)).unwrap();
                let linear = v.with_word_length(1);
                let expect = if k + j <= r as u32 && binom2(k as i64 - 1, j as i64) {
                    su.class_algebra().gen_named(&format!("c{}", k + j)).unwrap()
                } else {
                    Poly::zero()
                };
                assert_eq!(linear, expect, "su({r}): Sq^{} c{k}", 2 * j);
            }
        }
    }
}

#[test]
fn aii_squares_follow_odd_chern_classes() {
    // x_{4i+1} suspends c_{2i+1}; its total square is the suspension of the
    // linear part of Sq c_{2i+1} in su(2n).
    for n in 2..=4u32 {
        let (pres, table) = aii_square_table(n).unwrap();
        let su = TorusModel::new(Group::SpecialUnitary, 2 * n as usize, 2).unwrap();
        for i in 1..n {
            let k = 2 * i + 1;
            let mut want = Vec::new();
            for j in 0..=(2 * n - k) {
                let lin =
                    char_class_operation(&su, &format!("c{k}"), Operation::Sq(2 * j)).unwrap().with_word_length(1);
                if !lin.is_zero() {
                    let deg = 2 * (k + j) - 1;
                    if deg <= 4 * n - 3 && (deg - 1) % 4 == 0 {
                        want.push(format!("x{deg}"));
                    } else {
                        panic!("linear term in degree {deg} has no generator");
                    }
                }
            }
            want.reverse();
            let got = format_poly(pres.algebra(), &table[&format!("x{}", 4 * i + 1)]);
            assert_eq!(got, want.join(" + "), "AII(n={n}) Sq x{}", 4 * i + 1);
        }
    }
}

/// The `ΣQ_n` table must be the linear part of the operation on `q_i` in `BSp(n)`.
#[test]
fn quasi_projective_tables_match_the_symplectic_engine() {
    for prime in [2u32, 3, 5, 7] {
        for n in 1..=5u32 {
            let model = SuspensionModel::quasi_projective(n, prime).unwrap();
            let table: std::collections::BTreeMap<(String, String), i128> =
                model.entries().map(|(c, op, v)| ((c.to_string(), op.to_string()), v)).collect();
            let sp = TorusModel::new(Group::Symplectic, n as usize, prime).unwrap();
            let mut nonzero = 0;
            for i in 1..=n {
                for k in 1..4 * i {
                    let op = if prime == 2 { Operation::Sq(k) } else { Operation::P { k, prime } };
                    let shift = op.shift();
                    if shift % 4 != 0 || i + shift / 4 > n {
                        continue;
                    }
                    let j = i + shift / 4;
                    let v = char_class_operation(&sp, &format!("q{i}"), op).unwrap();
                    let want = coefficient(&sp, &v, &[(&format!("q{j}"), 1)]);
                    let got = table.get(&(format!("Σx_{i}"), op.to_string())).copied().unwrap_or(0);
                    assert_eq!(BigRational::from_integer(got.into()), want, "p={prime} n={n}: {op} q{i} -> q{j}");
                    nonzero += usize::from(got != 0);
                }
            }
            assert_eq!(nonzero, table.values().filter(|&&v| v != 0).count(), "p={prime} n={n}: stray entries");
        }
    }
}

fn composition(d: u32, seeds: &[u32]) -> Vec<u32> {
    let mut left = d;
    let mut out = Vec::with_capacity(seeds.len());
    for (i, s) in seeds.iter().enumerate() {
        let e = if i + 1 == seeds.len() { left } else { s % (left + 1) };
        out.push(e);
        left -= e;
    }
    out
}

fn homogeneous_torus(nvars: usize, modulus: u32, d: u32, terms: &[(Vec<u32>, i128)]) -> TorusPoly {
    TorusPoly::from_terms(
        nvars,
        modulus,
        terms.iter().map(|(seeds, c)| (composition(d, &seeds[..nvars]), c.rem_euclid(modulus as i128))),
    )
}

fn torus_terms() -> impl Strategy<Value = Vec<(Vec<u32>, i128)>> {
    prop::collection::vec((prop::collection::vec(0u32..16, 4), 1i128..5), 1..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn squares_on_torus_polynomials(
        nvars in 1usize..=4,
        (d, e) in (0u32..=4, 0u32..=4),
        (f_terms, g_terms) in (torus_terms(), torus_terms()),
    ) {
        let f = homogeneous_torus(nvars, 2, d, &f_terms);
        let g = homogeneous_torus(nvars, 2, e, &g_terms);
        let sq = |p: &TorusPoly, k: u32| operation_component(p, Operation::Sq(k), 1).unwrap();
        prop_assert_eq!(sq(&f, 0), f.clone());
        prop_assert_eq!(sq(&f, d), f.mul(&f));
        prop_assert!(sq(&f, d + 1).is_zero());
        let fg = f.mul(&g);
        for k in 0..=(d + e) {
            let mut cartan = TorusPoly::zero(nvars, 2);
            for i in 0..=k {
                cartan = cartan.add(&sq(&f, i).mul(&sq(&g, k - i)));
            }
            prop_assert_eq!(sq(&fg, k), cartan);
        }
        let total = total_operation_on_torus(&f, Operation::Sq(0), 1).unwrap();
        let mut sum = TorusPoly::zero(nvars, 2);
        for k in 0..=d {
            sum = sum.add(&sq(&f, k));
        }
        prop_assert_eq!(total, sum);
    }

    #[test]
    fn reduced_powers_on_torus_polynomials(
        nvars in 1usize..=3,
        (d, e) in (0u32..=3, 0u32..=3),
        (f_terms, g_terms) in (torus_terms(), torus_terms()),
    ) {
        let p = 3u32;
        let f = homogeneous_torus(nvars, p, d, &f_terms);
        let g = homogeneous_torus(nvars, p, e, &g_terms);
        let pk = |q: &TorusPoly, k: u32| operation_component(q, Operation::P { k, prime: p }, 2).unwrap();
        prop_assert_eq!(pk(&f, 0), f.clone());
        prop_assert_eq!(pk(&f, d), f.pow(p));
        prop_assert!(pk(&f, d + 1).is_zero());
        let fg = f.mul(&g);
        for k in 0..=(d + e) {
            let mut cartan = TorusPoly::zero(nvars, p);
            for i in 0..=k {
                cartan = cartan.add(&pk(&f, i).mul(&pk(&g, k - i)));
            }
            prop_assert_eq!(pk(&fg, k), cartan);
        }
    }

    #[test]
    fn express_inverts_expand(
        rank in 1usize..=4,
        modulus in prop::sample::select(vec![2u32, 3, 5]),
        terms in prop::collection::vec((prop::collection::vec(0u32..3, 4), 1i128..7), 0..5),
    ) {
        let es: Vec<TorusPoly> = (1..=rank).map(|k| TorusPoly::elementary(rank, modulus, k)).collect();
        let mut f = TorusPoly::zero(rank, modulus);
        for (exps, c) in &terms {
            let mut acc = TorusPoly::constant(rank, modulus, c.rem_euclid(modulus as i128));
            for (k, &a) in exps.iter().take(rank).enumerate() {
                acc = acc.mul(&es[k].pow(a));
            }
            f = f.add(&acc);
        }
        prop_assert!(check_symmetric(&f).is_ok());
        let g = express_symmetric(&f, rank).unwrap();
        prop_assert_eq!(g.expand(rank), f);
    }
}

#[test]
fn asymmetric_polynomials_are_rejected() {
    let t0 = TorusPoly::var(3, 2, 0);
    assert!(check_symmetric(&t0).is_err());
    assert!(express_symmetric(&t0, 3).is_err());
}

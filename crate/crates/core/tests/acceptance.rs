//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on
//! any failure.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use arcnash::arc::{monomial_arc, orbit_of_arc, special_point_is_singular, valuation_of_arc, ArcFamily, LaurentSeries, TorusArc};
use arcnash::order::{in_s, leq, minimal_elements};
use arcnash::resolution::{
    avoid_ray, hj_minimal_resolution_2d, is_divisorial, is_regular_fan, is_subdivision, preserves_regular_faces, resolve,
    Fan,
};
use arcnash::series::{
    blowup_chart_strict_transform, curve_on_hypersurface, dfm_surjective, extend_curve_to_surface,
    homogeneous_decomposition, jet_equations, residual_order, HomogeneousForm, LineSpec, TruncatedSeries,
};
use arcnash::{Cone, LatticeVector};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = BigRational;
type S = TruncatedSeries<Q>;

const SEED: u64 = 0x5eed_2024;

fn v(c: &[i64]) -> LatticeVector {
    LatticeVector::from_slice(c)
}

fn to_i64(x: &LatticeVector) -> Vec<i64> {
    x.coords().iter().map(|c| c.to_i64().expect("small")).collect()
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: true,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        ok: false,
        detail: detail.into(),
    }
}

macro_rules! check {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return fail(format!($($msg)*));
        }
    };
}

fn random_primitive(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> LatticeVector {
    loop {
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
        let w = v(&c);
        if !w.is_zero() {
            return w.primitive_part().expect("nonzero");
        }
    }
}

fn random_singular_cone(rng: &mut ChaCha8Rng, n: usize, rays: usize, bound: i64) -> Cone {
    loop {
        let gens: Vec<LatticeVector> = (0..rays).map(|_| random_primitive(rng, n, bound)).collect();
        if let Ok(c) = Cone::new(&gens) {
            if !c.is_regular() {
                return c;
            }
        }
    }
}

fn example(e: i64) -> Cone {
    Cone::new(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[1, 1, e])]).unwrap()
}

fn criterion_1() -> Outcome {
    for e in [2, 3, 5, 7, 11] {
        let report = minimal_elements(&example(e));
        let expected: Vec<LatticeVector> = (1..e).map(|d| v(&[1, 1, d])).collect();
        check!(report.minimal_elements == expected, "e={e}: got {:?}", report.minimal_elements);
        check!(report.essential_divisor_count() == (e - 1) as usize, "e={e}: count");
    }
    pass("e in {2,3,5,7,11}: minimal elements (1,1,d), 1 <= d < e")
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for i in 0..100 {
        let c = random_singular_cone(&mut rng, 2, 2, 25);
        let mut minimal = minimal_elements(&c).minimal_elements;
        let mut hj = match hj_minimal_resolution_2d(&c) {
            Ok(h) => h.new_rays,
            Err(e) => return fail(format!("cone {i} {c:?}: {e}")),
        };
        minimal.sort();
        hj.sort();
        check!(minimal == hj, "cone {i} {c:?}: minimal {minimal:?} vs continued fraction {hj:?}");
    }
    pass("100 random singular rank-2 cones agree with continued-fraction resolutions")
}

/// Independent small-integer model of a cone of rank at most 3.
struct BoxOracle {
    rays: Vec<Vec<i64>>,
    normals: Vec<Vec<i64>>,
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn det(rows: &[Vec<i64>]) -> i64 {
    match rows.len() {
        0 => 1,
        1 => rows[0][0],
        2 => rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0],
        3 => {
            let r = rows;
            r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0])
        }
        _ => unreachable!("rank at most 3"),
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// All `k x k` minors of the matrix with the given rows.
fn minors(rows: &[Vec<i64>], k: usize) -> Vec<i64> {
    let n = rows.first().map_or(0, Vec::len);
    let mut out = Vec::new();
    for rs in subsets(rows.len(), k) {
        for cs in subsets(n, k) {
            let m: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| rows[r][c]).collect()).collect();
            out.push(det(&m));
        }
    }
    out
}

fn matrix_rank(rows: &[Vec<i64>]) -> usize {
    let n = rows.first().map_or(0, Vec::len);
    (1..=rows.len().min(n)).rev().find(|&k| minors(rows, k).iter().any(|&m| m != 0)).unwrap_or(0)
}

impl BoxOracle {
    fn new(c: &Cone) -> BoxOracle {
        let rays: Vec<Vec<i64>> = c.rays().iter().map(to_i64).collect();
        let n = rays[0].len();
        let mut normals = BTreeSet::new();
        for sub in subsets(rays.len(), n - 1) {
            let cand: Vec<i64> = if n == 2 {
                let r = &rays[sub[0]];
                vec![-r[1], r[0]]
            } else {
                let (a, b) = (&rays[sub[0]], &rays[sub[1]]);
                vec![a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
            };
            let g = cand.iter().fold(0, |acc, &x| gcd(acc, x));
            if g == 0 {
                continue;
            }
            let cand: Vec<i64> = cand.iter().map(|x| x / g).collect();
            for sign in [1, -1] {
                let u: Vec<i64> = cand.iter().map(|x| x * sign).collect();
                if rays.iter().all(|r| dot(r, &u) >= 0) {
                    normals.insert(u);
                }
            }
        }
        BoxOracle {
            rays,
            normals: normals.into_iter().collect(),
        }
    }

    fn contains(&self, p: &[i64]) -> bool {
        self.normals.iter().all(|u| dot(u, p) >= 0)
    }

    fn in_s(&self, p: &[i64]) -> bool {
        if !self.contains(p) {
            return false;
        }
        let tight: Vec<&Vec<i64>> = self.normals.iter().filter(|u| dot(u, p) == 0).collect();
        let face: Vec<Vec<i64>> = self
            .rays
            .iter()
            .filter(|r| tight.iter().all(|u| dot(u, r) == 0))
            .cloned()
            .collect();
        if face.is_empty() {
            return false;
        }
        let d = matrix_rank(&face);
        if face.len() > d {
            return true;
        }
        minors(&face, d).iter().fold(0, |acc, &m| gcd(acc, m)) != 1
    }

    /// Half-width covering every closed fundamental parallelepiped.
    fn half_width(&self) -> i64 {
        let n = self.rays[0].len();
        (0..n).map(|j| self.rays.iter().map(|r| r[j].abs()).sum::<i64>()).max().unwrap()
    }

    fn minimal(&self) -> Vec<Vec<i64>> {
        let m = self.half_width();
        let n = self.rays[0].len();
        let mut pts = vec![vec![]];
        for _ in 0..n {
            pts = pts
                .into_iter()
                .flat_map(|p: Vec<i64>| {
                    (-m..=m).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        let positive: Vec<i64> = (0..n).map(|j| self.normals.iter().map(|u| u[j]).sum()).collect();
        let mut s: Vec<Vec<i64>> = pts.into_iter().filter(|p| self.in_s(p)).collect();
        s.sort_by_key(|p| dot(p, &positive));
        let mut out = Vec::new();
        for (i, p) in s.iter().enumerate() {
            let dominated = s[..i].iter().any(|w| {
                let d: Vec<i64> = p.iter().zip(w).map(|(a, b)| a - b).collect();
                d.iter().any(|&x| x != 0) && self.contains(&d)
            });
            if !dominated {
                out.push(p.clone());
            }
        }
        out.sort();
        out
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut shapes = (0usize, 0usize, 0usize);
    for i in 0..50 {
        let c = match i % 5 {
            0 => {
                shapes.0 += 1;
                random_singular_cone(&mut rng, 2, 2, 9)
            }
            1 | 2 => {
                shapes.1 += 1;
                random_singular_cone(&mut rng, 3, 3, 3)
            }
            _ => {
                shapes.2 += 1;
                loop {
                    let c = random_singular_cone(&mut rng, 3, 4, 2);
                    if !c.is_simplicial() {
                        break c;
                    }
                }
            }
        };
        let got: Vec<Vec<i64>> = minimal_elements(&c).minimal_elements.iter().map(to_i64).collect();
        let oracle = BoxOracle::new(&c).minimal();
        check!(got == oracle, "cone {i} {c:?}: library {got:?} vs box search {oracle:?}");
    }
    pass(format!(
        "50 random cones ({} rank 2, {} simplicial rank 3, {} non-simplicial rank 3) match exhaustive box search",
        shapes.0, shapes.1, shapes.2
    ))
}

fn certified(f: &Fan, c: &Cone) -> Result<(), String> {
    let checks = [
        ("subdivision", is_subdivision(f, c)),
        ("regular", Ok(is_regular_fan(f))),
        ("preserves regular faces", preserves_regular_faces(f, c)),
        ("divisorial", is_divisorial(f, c)),
    ];
    for (name, r) in checks {
        match r {
            Ok(true) => {}
            Ok(false) => return Err(format!("{name} certificate failed")),
            Err(e) => return Err(format!("{name}: {e}")),
        }
    }
    Ok(())
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut cones = Vec::new();
    for i in 0..20 {
        let rays = if i % 4 == 3 { 4 } else { 3 };
        let c = random_singular_cone(&mut rng, 3, rays, 3);
        let (fan, _) = match resolve(&c) {
            Ok(r) => r,
            Err(e) => return fail(format!("resolve {c:?}: {e}")),
        };
        if let Err(e) = certified(&fan, &c) {
            return fail(format!("resolve {c:?}: {e}"));
        }
        let rays = fan.rays();
        for m in minimal_elements(&c).minimal_elements {
            check!(rays.contains(&m), "resolve {c:?}: minimal {m} is not a ray");
        }
        cones.push(c);
    }
    let mut avoided = 0;
    let mut attempts = 0;
    while avoided < 20 {
        attempts += 1;
        check!(attempts < 10_000, "could not sample 20 non-minimal elements of S");
        let c = &cones[rng.gen_range(0..cones.len())];
        let minimal = minimal_elements(c).minimal_elements;
        let w = random_primitive(&mut rng, 3, 6);
        if !in_s(c, &w) || minimal.contains(&w) {
            continue;
        }
        let out = match avoid_ray(c, &w) {
            Ok(o) => o,
            Err(e) => return fail(format!("avoid {w} in {c:?}: {e}")),
        };
        if let Err(e) = certified(&out.fan, c) {
            return fail(format!("avoid {w} in {c:?}: {e}"));
        }
        check!(!out.fan.has_ray(&w), "avoid {w} in {c:?}: ray present");
        avoided += 1;
    }
    pass("20 random rank-3 resolutions certified and containing all minimal elements; 20 non-minimal rays avoided")
}

fn fermat() -> S {
    S::parse("x1^3+x2^3+x3^3+x4^3+x5^3").unwrap()
}

fn criterion_5() -> Outcome {
    let f = fermat();
    let fm = homogeneous_decomposition(&f).unwrap().into_values().next().unwrap();
    let l = LineSpec::<Q>::parse("s,-s,t,-t,0").unwrap();
    check!(dfm_surjective(&fm, &l).unwrap_or(false), "dF_m not surjective");
    let s = vec!["s".to_string()];
    let tail: Vec<S> = ["s^2", "0", "s^3 - s^5", "-s^2", "2*s^2 + s^4"]
        .iter()
        .map(|t| S::parse_in(t, &s).unwrap())
        .collect();
    let z = [q(1), q(-1), q(0), q(0), q(0)];
    let curve = match curve_on_hypersurface(&f, &z, 8, Some(&tail)) {
        Ok(c) => c,
        Err(e) => return fail(format!("curve: {e}")),
    };
    check!(curve.iter().all(|c| c.total_degree().unwrap_or(0) <= 8), "curve degree above 8");
    let germ = match extend_curve_to_surface(&f, &curve, &l, 8) {
        Ok(g) => g,
        Err(e) => return fail(format!("surface: {e}")),
    };
    // recheck the contracts from the returned data
    let residual = residual_order(&f, &germ.components, Some(20)).unwrap();
    check!(residual.at_least(11), "residual {residual} < 11");
    let st = vec!["s".to_string(), "t".to_string()];
    let at_t0: Vec<S> = germ
        .components
        .iter()
        .map(|c| c.substitute(&[S::variable(st.clone(), 0), S::zero(st.clone(), None)], None).unwrap())
        .collect();
    for (a, b) in at_t0.iter().zip(&curve) {
        let b2 = b.substitute(&[S::variable(st.clone(), 0)], None).unwrap();
        check!(*a == b2, "restriction {a} differs from {b2}");
    }
    let lin: Vec<(Q, Q)> = germ
        .components
        .iter()
        .map(|c| (c.coefficient(&[1, 0]), c.coefficient(&[0, 1])))
        .collect();
    let expect = [(1, 0), (-1, 0), (0, 1), (0, -1), (0, 0)];
    for ((a, b), (x, y)) in lin.iter().zip(expect) {
        check!(*a == q(x) && *b == q(y), "tangent plane differs from L");
    }
    pass(format!("Fermat cubic cone: surjective, residual {residual} >= 11, restriction and tangent plane match"))
}

fn criterion_6() -> Outcome {
    let f = S::parse("x1^3+x2^3+x3^3+x4^3+x5^6").unwrap();
    let g = match blowup_chart_strict_transform(&f, 5) {
        Ok(g) => g,
        Err(e) => return fail(e.to_string()),
    };
    check!(g == S::parse("x1^3+x2^3+x3^3+x4^3+x5^3").unwrap(), "got {g}");
    pass(format!("chart 5 strict transform: {g}"))
}

fn order_axioms(rng: &mut ChaCha8Rng, count: usize) -> Result<usize, String> {
    let cones: Vec<Cone> = (0..20)
        .map(|i| random_singular_cone(rng, if i % 2 == 0 { 2 } else { 3 }, if i % 6 == 5 { 4 } else { i % 2 + 2 }, 4))
        .collect();
    for _ in 0..count {
        let c = &cones[rng.gen_range(0..cones.len())];
        let n = c.rank();
        let pick = |rng: &mut ChaCha8Rng| -> LatticeVector {
            // nonnegative combinations of rays stay in the cone
            c.rays().iter().fold(LatticeVector::zero(n), |acc, r| &acc + &r.scale(&rng.gen_range(0..4).into()))
        };
        let (a, b, d) = (pick(rng), pick(rng), pick(rng));
        let le = |x: &LatticeVector, y: &LatticeVector| leq(c, x, y).map_err(|e| e.to_string());
        if !le(&a, &a)? {
            return Err(format!("reflexivity fails at {a}"));
        }
        if le(&a, &b)? && le(&b, &a)? && a != b {
            return Err(format!("antisymmetry fails at {a}, {b}"));
        }
        if le(&a, &b)? && le(&b, &d)? && !le(&a, &d)? {
            return Err(format!("transitivity fails at {a}, {b}, {d}"));
        }
        let sum = &a + &b;
        if !le(&a, &sum)? {
            return Err(format!("{a} is not below {sum}"));
        }
    }
    Ok(count)
}

fn random_arc(rng: &mut ChaCha8Rng, n: usize) -> TorusArc {
    let comps = (0..n)
        .map(|_| {
            let k = rng.gen_range(-3..=5);
            let mut terms = vec![(k, q(rng.gen_range(1..=4)))];
            for j in 1..4 {
                terms.push((k + j, q(rng.gen_range(-3..=3))));
            }
            LaurentSeries::new(terms)
        })
        .collect();
    TorusArc::new(comps, 24).unwrap()
}

fn valuation_suite(rng: &mut ChaCha8Rng, count: usize) -> Result<usize, String> {
    let cones: Vec<Cone> = (0..10).map(|_| random_singular_cone(rng, 3, 3, 3)).collect();
    for i in 0..count {
        if i % 2 == 0 {
            let (a, b) = (random_arc(rng, 3), random_arc(rng, 3));
            let ab = a.product(&b).map_err(|e| e.to_string())?;
            let lhs = valuation_of_arc(&ab).map_err(|e| e.to_string())?;
            let rhs = &valuation_of_arc(&a).unwrap() + &valuation_of_arc(&b).unwrap();
            if lhs != rhs {
                return Err(format!("additivity: {lhs} vs {rhs}"));
            }
        } else {
            let c = &cones[rng.gen_range(0..cones.len())];
            let w = v(&(0..3).map(|_| rng.gen_range(-4..=8)).collect::<Vec<_>>());
            let a = monomial_arc(&w).unwrap();
            if valuation_of_arc(&a).unwrap() != w {
                return Err(format!("round trip fails at {w}"));
            }
            if c.contains(&w).unwrap() {
                let face = orbit_of_arc(c, &a).map_err(|e| e.to_string())?;
                if face.rays() != c.smallest_face_containing(&w).unwrap().rays() {
                    return Err(format!("orbit of {w} in {c:?}"));
                }
                if special_point_is_singular(c, &a).unwrap() != in_s(c, &w) {
                    return Err(format!("singular-locus test of {w} in {c:?}"));
                }
            } else if orbit_of_arc(c, &a).is_ok() {
                return Err(format!("{w} outside {c:?} has an orbit"));
            }
        }
    }
    Ok(count)
}

fn semicontinuity_suite(rng: &mut ChaCha8Rng, count: usize) -> Result<usize, String> {
    for _ in 0..count {
        let comps: Vec<String> = (0..3)
            .map(|_| {
                let a = rng.gen_range(-2..=2);
                let b = rng.gen_range(-2..=2);
                format!("({a}*c + {b})*t + (c - {a})*t^2 + t^4")
            })
            .collect();
        let refs: Vec<&str> = comps.iter().map(String::as_str).collect();
        let fam = ArcFamily::parse(&refs, 8).map_err(|e| e.to_string())?;
        let bound = v(&[rng.gen_range(1..=3), rng.gen_range(1..=3), rng.gen_range(1..=3)]);
        let w = arcnash::arc::semicontinuity_witness(&fam, &bound).map_err(|e| e.to_string())?;
        let c0 = q(rng.gen_range(-3..=3));
        let member = fam.specialize(&c0).map_err(|e| e.to_string())?;
        let below = match valuation_of_arc(&member) {
            Ok(val) => val.coords().iter().zip(bound.coords()).all(|(x, y)| x <= y),
            Err(_) => false,
        };
        if below != arcnash::arc::in_semicontinuity_locus(&w, &c0) {
            return Err(format!("witness disagrees at c = {c0} for {comps:?}"));
        }
    }
    Ok(count)
}

fn jet_suite(rng: &mut ChaCha8Rng, count: usize) -> Result<usize, String> {
    for _ in 0..count {
        let mut text = String::new();
        for _ in 0..3 {
            let (a, i, j) = (rng.gen_range(-3..=3), rng.gen_range(0..=3), rng.gen_range(0..=2));
            text.push_str(&format!(" + {a}*x^{i}*y^{j}"));
        }
        let f = S::parse_in(&format!("x*y{text}"), &["x".to_string(), "y".to_string()]).map_err(|e| e.to_string())?;
        let m = rng.gen_range(1..=3);
        let big = jet_equations(&f, m).map_err(|e| e.to_string())?;
        let small = jet_equations(&f, m - 1).map_err(|e| e.to_string())?;
        // forgetting the top jet variables recovers the lower equations
        let vars = big[0].variables().to_vec();
        let keep: Vec<usize> = (0..vars.len()).filter(|k| !vars[*k].ends_with(&format!("_{m}"))).collect();
        for (a, b) in big.iter().zip(&small) {
            if a.terms().keys().any(|e| keep.len() < e.len() && (0..e.len()).any(|k| !keep.contains(&k) && e[k] > 0)) {
                return Err(format!("equation {a} uses top jet variables"));
            }
            let projected: Vec<(Vec<u32>, Q)> =
                a.terms().iter().map(|(e, c)| (keep.iter().map(|&k| e[k]).collect(), c.clone())).collect();
            let projected = S::new(b.variables().to_vec(), projected, None).map_err(|e| e.to_string())?;
            if projected != *b {
                return Err(format!("jet coherence fails for {f}"));
            }
        }
    }
    Ok(count)
}

/// Random hypersurfaces through the plane `x3 = ... = xn = 0` whose
/// tangent cone contains the line `(s, t, 0, ..., 0)`.
fn germ_suite(rng: &mut ChaCha8Rng, count: usize) -> Result<(usize, usize), String> {
    let mut solves = 0;
    let mut done = 0;
    while done < count {
        let n = rng.gen_range(4..=5);
        let m = rng.gen_range(2..=3u32);
        let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        // F_m = sum_{i >= 3} x_i * G_i with G_i of degree m - 1
        let mut text = String::new();
        for i in 3..=n {
            let mono = |rng: &mut ChaCha8Rng, deg: u32| -> String {
                (0..deg).map(|_| format!("*x{}", rng.gen_range(1..=n))).collect()
            };
            for _ in 0..3 {
                let a = rng.gen_range(-3..=3);
                text.push_str(&format!(" + {a}*x{i}{}", mono(rng, m - 1)));
            }
        }
        let hi = format!(" + {}*x1^{}*x2 + x{}^{}", rng.gen_range(-2..=2), m, n, m + 2);
        let f = match S::parse_in(&format!("0{text}{hi}"), &vars) {
            Ok(f) => f,
            Err(e) => return Err(e.to_string()),
        };
        let Some((mult, fm)) = homogeneous_decomposition(&f).ok().and_then(|d| d.into_iter().next()) else {
            continue;
        };
        if mult != m {
            continue;
        }
        let mut point = vec![q(0); n];
        let mut dir = vec![q(0); n];
        point[0] = q(1);
        dir[1] = q(1);
        let l = LineSpec::new(point.clone(), dir).unwrap();
        if !dfm_surjective(&fm, &l).map_err(|e| e.to_string())? {
            continue;
        }
        // invariance under a change of coordinates fixing the plane
        let a = rng.gen_range(-2..=2);
        let b = rng.gen_range(-2..=2);
        let sub: Vec<S> = (0..n)
            .map(|i| {
                let t = match i {
                    0 => format!("x1 + {a}*x3"),
                    1 => format!("x2 + {b}*x{n}"),
                    2 => format!("x3 + {a}*x4"),
                    _ => vars[i].clone(),
                };
                S::parse_in(&t, &vars).unwrap()
            })
            .collect();
        let g = fm.poly().substitute(&sub, None).map_err(|e| e.to_string())?;
        let gm = HomogeneousForm::new(g).map_err(|e| e.to_string())?;
        if !dfm_surjective(&gm, &l).map_err(|e| e.to_string())? {
            return Err(format!("surjectivity not invariant for {fm}"));
        }
        let n_ord = rng.gen_range(2..=5);
        let Ok(curve) = curve_on_hypersurface(&f, &point, n_ord, None) else {
            continue;
        };
        let germ = extend_curve_to_surface(&f, &curve, &l, n_ord).map_err(|e| format!("{f}: {e}"))?;
        if !germ.residual.at_least(m + n_ord) || !germ.restriction_matches || !germ.tangent_plane_matches {
            return Err(format!("contract failed for {f}"));
        }
        solves += germ.steps.len();
        done += 1;
    }
    Ok((done, solves))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let order = match order_axioms(&mut rng, 4000) {
        Ok(n) => n,
        Err(e) => return fail(format!("order axioms: {e}")),
    };
    let val = match valuation_suite(&mut rng, 4000) {
        Ok(n) => n,
        Err(e) => return fail(format!("valuations: {e}")),
    };
    let semi = match semicontinuity_suite(&mut rng, 500) {
        Ok(n) => n,
        Err(e) => return fail(format!("semicontinuity: {e}")),
    };
    let jets = match jet_suite(&mut rng, 1000) {
        Ok(n) => n,
        Err(e) => return fail(format!("jets: {e}")),
    };
    let (germs, solves) = match germ_suite(&mut rng, 500) {
        Ok(n) => n,
        Err(e) => return fail(format!("germs: {e}")),
    };
    let total = order + val + semi + jets + germs;
    check!(total >= 10_000, "only {total} instances");
    pass(format!(
        "{total} instances: {order} order, {val} valuation, {semi} semicontinuity, {jets} jet, {germs} germ runs with {solves} linear solves"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 7] = [
        ("minimal elements of <e1, e2, (1,1,e)>", criterion_1, Duration::from_secs(5)),
        ("rank-2 continued-fraction oracle", criterion_2, Duration::from_secs(30)),
        ("exhaustive box search", criterion_3, Duration::from_secs(60)),
        ("certified resolutions and avoided rays", criterion_4, Duration::from_secs(120)),
        ("germ lifting on the Fermat cubic cone", criterion_5, Duration::from_secs(60)),
        ("blowup chart of x1^3+x2^3+x3^3+x4^3+x5^6", criterion_6, Duration::from_secs(60)),
        ("property suites", criterion_7, Duration::from_secs(120)),
    ];
    let mut failures = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let ok = outcome.ok && elapsed <= *budget;
        if !ok {
            failures += 1;
        }
        let timing = if elapsed <= *budget { String::new() } else { format!(" (over budget {budget:?})") };
        println!(
            "{} criterion {}: {name}: {} [{:.2}s]{timing}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            elapsed.as_secs_f64()
        );
    }
    if failures > 0 {
        println!("{failures} criteria failed");
        std::process::exit(1);
    }
    println!("all 7 criteria passed");
}

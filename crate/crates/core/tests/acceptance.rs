//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use hodge_gauge::algebra::{Poly, Scalar};
use hodge_gauge::connection::{
    apply_gauge, connection_from_delta, curvature, normalize_fock_schwinger, EquivariantConnection,
};
use hodge_gauge::fixtures::{
    corrupt, counterexamples, kummer_mhs, random_connection, random_gauge, random_hodge, random_valid_mhs, rng,
    FixtureParams,
};
use hodge_gauge::doc::Document;
use hodge_gauge::freelie::{abelian_coefficient, coefficient_comparison, commutant_generators, lie_tables};
use hodge_gauge::hodgecoh::{
    absolute_cohomology, euler_characteristic, invariant_complex, real_absolute_cohomology,
};
use hodge_gauge::holonomy::triangle_delta;
use hodge_gauge::mhs::{validate_mhs, ComplexMHS, RealMHS};
use hodge_gauge::rees::{line_types, rees_w_line_type};
use hodge_gauge::splitting::{
    delta_operator, log_delta_components, splitting_contracts, DeltaObject,
};
use rand::Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e2s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// The shared corpus: 200 valid structures (dim ≤ 8, p, q ∈ [−3, 3] so weights lie in [−6, 6]).
struct Fixtures {
    valid: Vec<(DeltaObject, ComplexMHS)>,
}

fn fixtures() -> Fixtures {
    let params = FixtureParams {
        max_dim: 8,
        label_bound: 3,
        complex: true,
    };
    let mut r = rng(1);
    let valid = (0..200).map(|_| random_valid_mhs(&mut r, &params).unwrap()).collect();
    Fixtures { valid }
}

fn criterion_1(f: &Fixtures) -> Outcome {
    let start = Instant::now();
    for (k, (d, v)) in f.valid.iter().enumerate() {
        let h = validate_mhs(v).map_err(|e| format!("fixture {k}: {e}"))?;
        ensure(&h == d.hodge(), || format!("fixture {k}: Hodge numbers differ"))?;
    }
    let mut r = rng(2);
    let mut kinds = [0usize; 3];
    for (k, (_, v)) in f.valid.iter().enumerate() {
        let (kind, bad) = corrupt(&mut r, v).map_err(e2s)?;
        kinds[match kind {
            hodge_gauge::fixtures::Corruption::MergeWeight(_) => 0,
            hodge_gauge::fixtures::Corruption::DropHodgeJump(_) => 1,
            hodge_gauge::fixtures::Corruption::DropConjugateJump(_) => 2,
        }] += 1;
        ensure(validate_mhs(&bad).is_err(), || format!("corruption {k} ({kind:?}) validated"))?;
    }
    let t = start.elapsed();
    ensure(t < Duration::from_secs(10), || format!("took {t:.2?}"))?;
    Ok(format!(
        "200 valid pass, 200 corruptions rejected (merge {}, F' {}, F'' {}) in {t:.2?}",
        kinds[0], kinds[1], kinds[2]
    ))
}

fn criterion_2(f: &Fixtures) -> Outcome {
    let mut n = 0;
    for (k, (_, v)) in f.valid.iter().enumerate() {
        for c in splitting_contracts(v).map_err(e2s)? {
            ensure(c.pass, || format!("fixture {k}: {}", c.name))?;
            n += 1;
        }
    }
    Ok(format!("{n} contract checks on 200 fixtures"))
}

fn criterion_3(f: &Fixtures) -> Outcome {
    let mut n = 0;
    for (k, (_, v)) in f.valid.iter().enumerate().filter(|(_, (d, _))| d.dim() <= 6) {
        let d = delta_operator(v).map_err(e2s)?;
        let t = triangle_delta(&connection_from_delta(&d).map_err(e2s)?).map_err(e2s)?;
        ensure(t == d, || format!("fixture {k}: triangle holonomy differs from delta"))?;
        n += 1;
    }
    Ok(format!("bit-exact on {n} fixtures of dim <= 6"))
}

fn criterion_4() -> Outcome {
    let params = FixtureParams::default();
    let mut r = rng(4);
    let mut nontrivial = 0;
    for k in 0..100 {
        let h = random_hodge(&mut r, &params);
        let c = random_connection(&mut r, &h, true);
        let g = random_gauge(&mut r, &h, true);
        nontrivial += usize::from(!g.is_identity());
        let (n0, _) = normalize_fock_schwinger(&c).map_err(e2s)?;
        let moved = apply_gauge(&c, &g).map_err(e2s)?;
        let (n1, _) = normalize_fock_schwinger(&moved).map_err(e2s)?;
        ensure(n0 == n1, || format!("pair {k}: normal forms differ"))?;
        let (again, _) = normalize_fock_schwinger(&n0).map_err(e2s)?;
        ensure(again == n0, || format!("pair {k}: normalization not idempotent"))?;
    }
    Ok(format!("100 pairs ({nontrivial} with nontrivial gauge), idempotent"))
}

fn criterion_5(f: &Fixtures) -> Outcome {
    let (mut flat, mut curved) = (0, 0);
    for (k, (d, _)) in f.valid.iter().enumerate() {
        for d in [d.clone(), DeltaObject::identity(d.hodge().clone())] {
            let c = connection_from_delta(&d).map_err(e2s)?;
            let zero = curvature(&c).is_zero();
            ensure(zero == d.is_split(), || format!("fixture {k}: curvature zero = {zero}, split = {}", d.is_split()))?;
            if zero {
                flat += 1;
            } else {
                curved += 1;
            }
        }
    }
    Ok(format!("{flat} split deltas flat, {curved} non-split deltas curved"))
}

fn criterion_6(f: &Fixtures) -> Outcome {
    let mut r = rng(6);
    let mut lines = 0;
    for (k, (_, v)) in f.valid.iter().enumerate() {
        let w = rees_w_line_type(v).map_err(e2s)?;
        ensure(w.iter().all(|&a| a == 0), || format!("fixture {k}: P1_W type {w:?}"))?;
        let d = delta_operator(v).map_err(e2s)?;
        let points: Vec<[Scalar; 2]> = (0..20)
            .map(|_| {
                let mut s = || Scalar::gaussian(r.gen_range(-4..=4), r.gen_range(-2..=2));
                [s(), s()]
            })
            .collect();
        for lt in line_types(&d, &points).map_err(e2s)? {
            ensure(lt.splitting_type.iter().all(|&a| a == 0), || {
                format!("fixture {k}: line through {:?} has type {:?}", lt.point, lt.splitting_type)
            })?;
            lines += 1;
        }
    }
    let Document::Mhs(bad) = &counterexamples().map_err(e2s)?[0] else {
        return Err("counterexample is not an mhs document".into());
    };
    let bad = bad.to_mhs().map_err(e2s)?;
    let t = rees_w_line_type(&bad).map_err(e2s)?;
    ensure(t.iter().any(|&a| a != 0), || format!("non-Hodge triple has trivial type {t:?}"))?;
    Ok(format!("{lines} lines trivial; non-Hodge triple has type {t:?} on P1_W"))
}

/// −∫_{−1}^0 t^{p−1}(−1−t)^{q−1} dt, computed here from scratch.
fn hypotenuse_integral(p: u32, q: u32) -> Scalar {
    let t = Poly::new(vec![Scalar::from_int(0), Scalar::from_int(1)]);
    let s = Poly::new(vec![Scalar::from_int(-1), Scalar::from_int(-1)]);
    let f = &t.pow(p - 1) * &s.pow(q - 1);
    -f.integrate(&Scalar::from_int(-1), &Scalar::from_int(0))
}

fn criterion_7(f: &Fixtures) -> Outcome {
    let mut subst = 0;
    for (k, (d, _)) in f.valid.iter().enumerate() {
        let spread = d.hodge().weight_spread();
        if spread > 10 {
            continue;
        }
        let tables = lie_tables(spread.max(2) as u32).map_err(e2s)?;
        let c = connection_from_delta(d).map_err(e2s)?;
        ensure(tables.log_components(d.dim(), c.a()) == log_delta_components(d), || {
            format!("fixture {k}: z(A) differs from log delta")
        })?;
        subst += 1;
    }
    // independent of the inverse tables: z(A) against the logarithm of the actual holonomy
    let mut r = rng(7);
    let params = FixtureParams::default();
    for k in 0..40 {
        let h = random_hodge(&mut r, &params);
        let a = random_connection(&mut r, &h, true).a().clone();
        let b = a.iter().map(|(key, m)| (*key, -m)).collect();
        let c = EquivariantConnection::new(h.clone(), a, b).map_err(e2s)?;
        let hol = triangle_delta(&c).map_err(e2s)?;
        let tables = lie_tables(h.weight_spread().max(2) as u32).map_err(e2s)?;
        ensure(tables.log_components(c.dim(), c.a()) == log_delta_components(&hol), || {
            format!("random FS connection {k}: z(A) is not log of its holonomy")
        })?;
    }
    let t8 = lie_tables(8).map_err(e2s)?;
    ensure(t8.roundtrip_holds(), || "z/alpha roundtrip fails at weight 8".into())?;
    for w in 2..=8u32 {
        for p in 1..w {
            let exact = hypotenuse_integral(p, w - p);
            let got = Scalar::from_rational(t8.leading(p, w - p));
            ensure(got == exact && Scalar::from_rational(abelian_coefficient(p, w - p)) == exact, || {
                format!("({p},{}): coefficient {got} but integral {exact}", w - p)
            })?;
        }
    }
    let cmp = coefficient_comparison(8);
    let differ = cmp.iter().filter(|c| !c.agree).count();
    let first = cmp.first().map_or(String::new(), |c| {
        format!("; e.g. ({},{}) computed {} vs stated {}", c.p, c.q, c.computed, c.stated)
    });
    Ok(format!(
        "z(A) = D on {subst} fixtures and 40 random FS connections, roundtrip to weight 8, \
         coefficients = integral; comparison report: {differ}/{} bidegrees differ from the stated binomial{first}",
        cmp.len()
    ))
}

fn criterion_8(f: &Fixtures) -> Outcome {
    let dims = |v: &ComplexMHS| absolute_cohomology(v).map(|e| (e.ext0, e.ext1)).map_err(e2s);
    ensure(dims(&ComplexMHS::pure(0, 0))? == (1, 0), || "C(0) is not (1,0)".into())?;
    ensure(dims(&ComplexMHS::pure(-1, -1))? == (0, 1), || "P(-1,-1) is not (0,1)".into())?;
    for c in ["1", "-2", "i", "2+i", "1/3"] {
        let got = dims(&kummer_mhs(&c.parse().unwrap()))?;
        ensure(got == (0, 0), || format!("K({c}) gives {got:?}"))?;
    }
    for (k, (_, v)) in f.valid.iter().enumerate() {
        let (e0, e1) = dims(v)?;
        let chi = euler_characteristic(v).map_err(e2s)?;
        ensure(e0 as i64 - e1 as i64 == chi, || format!("fixture {k}: {e0} - {e1} != {chi}"))?;
    }
    let mut r = rng(8);
    let params = FixtureParams::default();
    for k in 0..60 {
        let h = random_hodge(&mut r, &params);
        let c = random_connection(&mut r, &h, true);
        let g = random_gauge(&mut r, &h, true);
        let a = invariant_complex(&c).and_then(|x| x.cohomology()).map_err(e2s)?;
        let b = invariant_complex(&apply_gauge(&c, &g).map_err(e2s)?)
            .and_then(|x| x.cohomology())
            .map_err(e2s)?;
        ensure((a.ext0, a.ext1) == (b.ext0, b.ext1), || format!("pair {k}: dims change under gauge"))?;
    }
    let real = real_absolute_cohomology(&RealMHS::tate(1)).map_err(e2s)?;
    ensure((real.ext0, real.ext1) == (0, 1), || format!("R(1) gives ({}, {})", real.ext0, real.ext1))?;
    Ok("C(0)=(1,0), P(-1,-1)=(0,1), K(c)=(0,0), Euler on 200 fixtures, gauge invariant on 60 pairs, R(1)=(0,1) over Q".into())
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let report = commutant_generators(8).map_err(e2s)?;
    let t = start.elapsed();
    ensure(report.pass(), || "rank deficiency".into())?;
    ensure(t < Duration::from_secs(60), || format!("took {t:.2?}"))?;
    Ok(format!("{} bidegrees of weight <= 8 at full rank in {t:.2?}", report.ranks.len()))
}

fn run_suite(jobs: usize) -> Result<Vec<u8>, String> {
    let corpus = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
    let out = Command::new(env!("CARGO_BIN_EXE_hodge-gauge"))
        .args(["suite", corpus, "--jobs", &jobs.to_string()])
        .output()
        .map_err(e2s)?;
    ensure(out.status.code() == Some(0), || format!("suite exited with {:?}", out.status.code()))?;
    Ok(out.stdout)
}

fn criterion_10() -> Outcome {
    let a = run_suite(1)?;
    let b = run_suite(1)?;
    let c = run_suite(4)?;
    ensure(a == b, || "two serial runs differ".into())?;
    ensure(a == c, || "serial and parallel runs differ".into())?;
    let count = String::from_utf8_lossy(&a).matches("\"command\":").count();
    Ok(format!("{} bytes, {count} report records, identical across 2 serial runs and --jobs 4", a.len()))
}

fn main() {
    let f = fixtures();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("opposedness validator", Box::new(|| criterion_1(&f))),
        ("splitting contracts", Box::new(|| criterion_2(&f))),
        ("delta-holonomy roundtrip", Box::new(|| criterion_3(&f))),
        ("gauge uniqueness", Box::new(criterion_4)),
        ("flat iff split", Box::new(|| criterion_5(&f))),
        ("line triviality", Box::new(|| criterion_6(&f))),
        ("free Lie consistency", Box::new(|| criterion_7(&f))),
        ("absolute cohomology", Box::new(|| criterion_8(&f))),
        ("commutant generation", Box::new(criterion_9)),
        ("determinism", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{t:.2?}]", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{t:.2?}]", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

//! Acceptance suite: twelve numbered criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the terminal.
//! A criterion whose failure is explained by the check itself (message
//! tagged `KNOWN`) is reported as FAIL with the explanation but does not fail
//! the build; any other failure exits non-zero.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sailstress::catalog;
use sailstress::exactnum::{det3_cols, int, rat, Int, LatticePoint, Mat3, Rat, Vec3};
use sailstress::intgeom::{
    integer_area, integer_distance_line, integer_distance_plane, integer_length, integer_sine, integer_volume,
};
use sailstress::stress::{
    check_periodicity, check_planar_equilibrium, check_projective_equilibrium, common_sign, integer_multiplier,
    integerize_stresses, lift_framework, lifting_coefficient, lifting_coefficient_invariants, project_surface,
    surface_lifting_coefficients, ProjectionPlane, SeedPoint, StressError, StressedFramework,
};
use sailstress::surface::{
    brute_force_sail, compare_with_patch, generate_patch, ConeSpec, PeriodicSailSpec, RaySign, SailPatch, Window,
};

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn lp(x: i64, y: i64, z: i64) -> LatticePoint {
    Vec3::from_i64(x, y, z)
}

/// The 5×5 window used throughout.
fn window() -> Window {
    Window::square(-2, 2)
}

struct Example {
    name: String,
    spec: PeriodicSailSpec,
    patch: SailPatch,
    framework: StressedFramework,
}

fn example(name: &str, spec: PeriodicSailSpec, plane: ProjectionPlane) -> Example {
    let patch = generate_patch(&spec, window()).expect("patch");
    let framework = project_surface(&patch.surface, &plane).expect("projection");
    Example {
        name: name.into(),
        spec,
        patch,
        framework,
    }
}

fn examples() -> Vec<Example> {
    let mut out = vec![
        example("golden", catalog::golden_sail(), catalog::golden_plane()),
        example("pentagon", catalog::pentagon_sail(), catalog::pentagon_plane()),
    ];
    for a in 0..3 {
        out.push(example(&format!("family a={a}"), catalog::family_sail(a), catalog::family_plane()));
    }
    out
}

/// Coefficient of every edge template, checking that all its edges agree.
fn class_values(ex: &Example) -> Result<Vec<Rat>, String> {
    let coeffs = surface_lifting_coefficients(&ex.patch.surface).map_err(|e| e.to_string())?;
    let mut by_class: BTreeMap<usize, BTreeSet<Rat>> = BTreeMap::new();
    for (edge, w) in &coeffs.values {
        let class = ex.patch.edge_class[edge];
        by_class.entry(class).or_default().insert(w.clone());
    }
    (0..ex.spec.fd_edges.len())
        .map(|k| match by_class.get(&k).map(|s| s.iter().collect::<Vec<_>>()) {
            Some(v) if v.len() == 1 => Ok(v[0].clone()),
            Some(v) => Err(format!("{}: edge class {k} has {} different values", ex.name, v.len())),
            None => Err(format!("{}: edge class {k} has no interior edge", ex.name)),
        })
        .collect()
}

fn equilibrium_exact(ex: &Example) -> Result<usize, String> {
    let r = check_planar_equilibrium(&ex.framework);
    ensure!(r.checked() > 0, "{}: no interior vertex checked", ex.name);
    ensure!(r.passed(), "{}: nonzero residual at vertices {:?}", ex.name, r.failing());
    Ok(r.checked())
}

fn show(v: &[Rat]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

// ---- criteria ----

fn worked_coefficient() -> Check {
    let (p1, p2, p3, p4) = (lp(2, 3, 4), lp(2, 7, 9), lp(1, -3, 5), lp(5, 6, 7));
    let w = lifting_coefficient(&p1.to_rat(), &p2.to_rat(), &p3.to_rat(), &p4.to_rat()).map_err(|e| e.to_string())?;
    ensure!(w == rat(-11, 69), "coefficient {w}, expected -11/69");
    let inv = lifting_coefficient_invariants(&p1, &p2, &p3, &p4).map_err(|e| e.to_string())?;
    ensure!(inv.value == rat(11, 69), "invariant form {}", inv.value);
    ensure!(
        inv.sine == int(33) && inv.length == int(1) && inv.distances == (int(69), int(3)),
        "components sine {} length {} distances {:?}",
        inv.sine,
        inv.length,
        inv.distances
    );
    Ok("omega = -11/69; |omega| = 33/(1*69*3)".into())
}

fn golden_window(ex: &Example) -> Check {
    let coeffs = surface_lifting_coefficients(&ex.patch.surface).map_err(|e| e.to_string())?;
    ensure!(!coeffs.values.is_empty(), "no interior edges");
    ensure!(
        coeffs.values.values().all(|w| *w == rat(1, 2)),
        "coefficients other than 1/2 present"
    );
    let checked = equilibrium_exact(ex)?;
    let v = ex.patch.surface.vertices();
    for e in &ex.framework.edges {
        let expected = coeffs.values.get(&(e.i, e.j)).map(|_| v[e.i].z() * v[e.j].z() / int(2));
        ensure!(e.omega_bar == expected, "edge {}-{}: stress {:?}, expected {:?}", e.i, e.j, e.omega_bar, expected);
        ensure!(ex.framework.betas[e.i] == *v[e.i].z(), "beta is not the third coordinate");
    }
    Ok(format!(
        "{} interior edges with omega 1/2, {} vertices in equilibrium",
        coeffs.values.len(),
        checked
    ))
}

fn pentagon_coefficients(ex: &Example) -> Check {
    let values = class_values(ex)?;
    let expected = [rat(1, 2), rat(1, 1), rat(1, 1), rat(2, 3), rat(1, 6), rat(1, 3), rat(1, 2)];
    ensure!(values == expected, "edge classes give ({})", show(&values));
    let v = ex.patch.surface.vertices();
    for e in &ex.framework.edges {
        let expected = e.omega.as_ref().map(|w| w * v[e.i].y() * v[e.j].y());
        ensure!(e.omega_bar == expected, "edge {}-{}: stress is not omega*y_i*y_j", e.i, e.j);
    }
    let checked = equilibrium_exact(ex)?;
    let (nv, ne, nf) = ex.spec.period_counts();
    ensure!((nv, ne, nf) == (3, 7, 4), "per-period counts V={nv} E={ne} F={nf}");
    ensure!(nv as i64 - ne as i64 + nf as i64 == 0, "Euler characteristic nonzero");
    Ok(format!("({}); V-E+F = 3-7+4 = 0; {checked} vertices in equilibrium", show(&values)))
}

fn family_coefficients(family: &[Example]) -> Check {
    let mut lines = Vec::new();
    for (a, ex) in family.iter().enumerate() {
        let a = a as i64;
        let values = class_values(ex)?;
        let expected = vec![rat(a + 1, a + 2), rat(1, a + 2), rat(a * a + 3 * a + 1, a + 2)];
        ensure!(values == expected, "a={a}: edge classes give ({}), expected ({})", show(&values), show(&expected));
        if a == 0 {
            ensure!(values.iter().all(|w| *w == rat(1, 2)), "a=0 is not (1/2, 1/2, 1/2)");
        }
        let n = Vec3::from_i64(2, 1, 1).to_rat();
        for (p, b) in ex.patch.surface.vertices().iter().zip(&ex.framework.betas) {
            ensure!(n.dot(p) == *b, "a={a}: beta differs from 2x+y+z");
        }
        let checked = equilibrium_exact(ex)?;
        lines.push(format!("a={a}: ({}) eq@{checked}", show(&values)));
    }
    Ok(lines.join("; "))
}

fn periodicity(list: &[&Example]) -> Check {
    let mut lines = Vec::new();
    for ex in list {
        let labels = ex.patch.surface.labels().unwrap();
        let r = check_periodicity(&ex.spec, labels, &ex.framework.coefficient_map(), &window());
        ensure!(r.passed(), "{}: classes {:?} differ across translates", ex.name, r.flagged_classes());
        ensure!(
            r.classes.len() == ex.spec.fd_edges.len(),
            "{}: only {} of {} edge classes seen",
            ex.name,
            r.classes.len(),
            ex.spec.fd_edges.len()
        );
        let compared: usize = r.classes.values().map(|c| c.edges).sum();
        lines.push(format!("{}: {} classes over {compared} edges, 0 exceptions", ex.name, r.classes.len()));
    }
    Ok(lines.join("; "))
}

fn signs_and_multipliers(all: &[Example]) -> Check {
    for ex in all {
        let coeffs = surface_lifting_coefficients(&ex.patch.surface).map_err(|e| e.to_string())?;
        let s = common_sign(coeffs.values.values());
        ensure!(s.is_some(), "{}: coefficients of mixed sign", ex.name);
    }
    // fundamental sets: one coefficient per edge template
    let golden = class_values(&all[0])?;
    let pentagon = class_values(&all[1])?;
    let (mg, mp) = (integer_multiplier(&golden), integer_multiplier(&pentagon));
    ensure!(mg == int(2) && mp == int(6), "fundamental multipliers {mg} and {mp}");
    // the same through the projected stresses, on one period of edges
    let single = Window::square(0, 1);
    let (_, fg) = integerize_stresses(&all[0].framework, Some(&single));
    let (scaled, fp) = integerize_stresses(&all[1].framework, Some(&single));
    ensure!(fg == int(2) && fp == int(6), "integerize_stresses multipliers {fg} and {fp}");
    ensure!(
        scaled.edges.iter().flat_map(|e| &e.omega_bar).all(|w| w.is_integer()),
        "scaled stresses are not integral"
    );
    Ok(format!("{} patches single-signed; multipliers 2 and 6", all.len()))
}

fn oracle_equivalence(golden: &Example) -> Check {
    let spec = &golden.spec;
    let cone = ConeSpec::algebraic(spec.matrix.clone(), [RaySign::Plus; 3]).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let hull = brute_force_sail(&cone, 12).map_err(|e| e.to_string())?;
    let patch = generate_patch(spec, Window::square(-8, 8)).map_err(|e| e.to_string())?;
    let cmp = compare_with_patch(&hull, &patch.surface);
    ensure!(!cmp.certified_vertices.is_empty(), "certified region is empty");
    ensure!(cmp.uncovered.is_empty(), "{} certified vertices outside the patch", cmp.uncovered.len());
    ensure!(
        cmp.identical(),
        "hull {} vertices, patch {} in region, faces {}/{}",
        cmp.certified_vertices.len(),
        cmp.patch_vertices_in_region.len(),
        cmp.matched_faces,
        cmp.covered_faces
    );
    Ok(format!(
        "B=12: {} certified faces, {} vertices, identical to the patch ({:.2}s)",
        cmp.covered_faces,
        cmp.certified_vertices.len(),
        start.elapsed().as_secs_f64()
    ))
}

fn random_point(rng: &mut ChaCha8Rng, r: i64) -> LatticePoint {
    lp(rng.gen_range(-r..=r), rng.gen_range(-r..=r), rng.gen_range(-r..=r))
}

/// Quadruples with both face planes away from the origin and distinct.
fn random_quadruple(rng: &mut ChaCha8Rng) -> [LatticePoint; 4] {
    loop {
        let q = [(); 4].map(|_| random_point(rng, 6));
        let [a, b, c, d] = &q;
        if !det3_cols(a, b, c).is_zero()
            && !det3_cols(a, b, d).is_zero()
            && !det3_cols(&(b - a), &(c - a), &(d - a)).is_zero()
        {
            return q;
        }
    }
}

fn cross_validation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in 0..200 {
        let [a, b, c, d] = random_quadruple(&mut rng);
        let w = lifting_coefficient(&a.to_rat(), &b.to_rat(), &c.to_rat(), &d.to_rat()).map_err(|e| e.to_string())?;
        let inv = lifting_coefficient_invariants(&a, &b, &c, &d).map_err(|e| e.to_string())?;
        ensure!(w.abs() == inv.value, "sample {n}: |{w}| != {}", inv.value);
    }
    Ok("200 random quadruples agree".into())
}

fn choice_independence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let r = |rng: &mut ChaCha8Rng| rat(rng.gen_range(-12..=12), rng.gen_range(1..=7));
    for n in 0..100 {
        let q = random_quadruple(&mut rng);
        let [a, b, c, d] = q.map(|p| p.to_rat());
        let w = lifting_coefficient(&a, &b, &c, &d).map_err(|e| e.to_string())?;
        let in_plane = |third: &Vec3<Rat>, rng: &mut ChaCha8Rng| loop {
            let (s, t) = (r(rng), r(rng));
            if !t.is_zero() {
                return &a + &(&(&b - &a).scale(&s) + &(third - &a).scale(&t));
            }
        };
        let c2 = in_plane(&c, &mut rng);
        let d2 = in_plane(&d, &mut rng);
        let w2 = lifting_coefficient(&a, &b, &c2, &d2).map_err(|e| e.to_string())?;
        ensure!(w == w2, "configuration {n}: {w} became {w2}");
    }
    Ok("100 random re-choices leave omega unchanged".into())
}

fn projective_equilibrium(all: &[Example]) -> Check {
    let mut total = 0;
    for ex in all {
        let coeffs = surface_lifting_coefficients(&ex.patch.surface).map_err(|e| e.to_string())?;
        let r = check_projective_equilibrium(&ex.patch.surface, &coeffs.values);
        ensure!(r.checked() > 0, "{}: nothing checked", ex.name);
        ensure!(r.passed(), "{}: nonzero at {:?}", ex.name, r.failing());
        total += r.checked();
    }
    Ok(format!("{total} interior vertices over {} patches", all.len()))
}

fn true_seed(ex: &Example) -> [SeedPoint; 3] {
    let s = &ex.patch.surface;
    let f = &s.faces()[0];
    [0, 1, 2].map(|k| SeedPoint {
        vertex: f[k],
        point: s.vertices()[f[k]].clone(),
    })
}

/// Interior edges whose endpoints are both on the patch boundary. Each one
/// splits the patch in two, so no face cycle runs across it.
fn chords(f: &StressedFramework) -> BTreeSet<(usize, usize)> {
    f.edges
        .iter()
        .filter(|e| e.omega_bar.is_some() && !f.interior[e.i] && !f.interior[e.j])
        .map(|e| (e.i, e.j))
        .collect()
}

fn reconstruction(golden: &Example) -> Check {
    let seed = true_seed(golden);
    let lifted = lift_framework(&golden.framework, &seed).map_err(|e| e.to_string())?;
    ensure!(
        lifted.surface.vertices() == golden.patch.surface.vertices(),
        "round trip does not recover the patch vertices"
    );
    let mut undetected = BTreeSet::new();
    let mut stressed = 0;
    for k in 0..golden.framework.edges.len() {
        let mut f = golden.framework.clone();
        let Some(w) = f.edges[k].omega_bar.as_mut() else { continue };
        stressed += 1;
        *w += rat(1, 1);
        let residual = !check_planar_equilibrium(&f).passed();
        let monodromy = matches!(lift_framework(&f, &seed), Err(StressError::MonodromyNonzero { .. }));
        if !residual && !monodromy {
            // the perturbed stress is the stress of another surface
            let other = lift_framework(&f, &seed).map_err(|e| e.to_string())?;
            ensure!(other.surface.vertices() != golden.patch.surface.vertices(), "perturbation had no effect");
            undetected.insert((f.edges[k].i, f.edges[k].j));
        }
    }
    let expected = chords(&golden.framework);
    if undetected.is_empty() {
        return Ok(format!("exact round trip; all {stressed} perturbations detected"));
    }
    ensure!(
        undetected == expected,
        "undetected perturbations {undetected:?} are not the boundary chords {expected:?}"
    );
    let labels = golden.patch.surface.labels().unwrap();
    let names: Vec<String> = undetected
        .iter()
        .map(|&(i, j)| format!("({},{})-({},{})", labels[i].i, labels[i].j, labels[j].i, labels[j].j))
        .collect();
    Err(format!(
        "KNOWN exact round trip; {} of {stressed} perturbations detected; the other {} are on boundary chords {} \
         where the perturbed stress lifts to another surface",
        stressed - undetected.len(),
        undetected.len(),
        names.join(" ")
    ))
}

fn random_unimodular(rng: &mut ChaCha8Rng) -> Mat3<Int> {
    loop {
        let mut m = Mat3::<Int>::identity();
        for _ in 0..6 {
            let (i, j) = (rng.gen_range(0..3), rng.gen_range(0..3));
            let mut e = Mat3::<Int>::identity();
            if i != j {
                e.0[i][j] = int(rng.gen_range(-2..=2));
            } else {
                e.0[i][i] = int(-1);
            }
            m = &e * &m;
        }
        if !m.is_identity() {
            return m;
        }
    }
}

fn unimodular_invariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let base = [lp(2, 3, 4), lp(2, 7, 9), lp(1, -3, 5), lp(5, 6, 7)];
    let invariants = |[a, b, c, d]: &[LatticePoint; 4]| -> Result<[Int; 6], String> {
        let e = |r: Result<Int, _>| r.map_err(|e: sailstress::intgeom::IntGeomError| e.to_string());
        Ok([
            e(integer_length(a, b))?,
            e(integer_area(&(b - a), &(c - a)))?,
            e(integer_volume(&(c - a), &(d - a), &(b - a)))?,
            e(integer_distance_line(c, a, b))?,
            e(integer_distance_plane(d, a, b, c))?,
            e(integer_sine(a, b, c, d))?,
        ])
    };
    let want = invariants(&base)?;
    for n in 0..20 {
        let m = random_unimodular(&mut rng);
        ensure!(m.det().abs() == int(1), "transform {n} is not unimodular");
        let moved = base.clone().map(|p| m.mul_vec(&p));
        let got = invariants(&moved)?;
        ensure!(got == want, "transform {n}: {got:?} != {want:?}");
    }
    Ok(format!(
        "length, area, volume, distances and sine ({}) fixed by 20 transforms",
        want.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
    ))
}

fn main() {
    let all = examples();
    let (golden, pentagon) = (&all[0], &all[1]);
    let criteria: Vec<Criterion> = vec![
        ("worked coefficient", Box::new(worked_coefficient)),
        ("golden sail window", Box::new(|| golden_window(golden))),
        ("pentagon sail coefficients", Box::new(|| pentagon_coefficients(pentagon))),
        ("one-parameter family", Box::new(|| family_coefficients(&all[2..]))),
        ("periodicity", Box::new(|| periodicity(&[golden, pentagon]))),
        ("sign uniformity and multipliers", Box::new(|| signs_and_multipliers(&all))),
        ("lattice hull oracle", Box::new(|| oracle_equivalence(golden))),
        ("coefficient cross-validation", Box::new(cross_validation)),
        ("choice independence", Box::new(choice_independence)),
        ("projective equilibrium", Box::new(|| projective_equilibrium(&all))),
        ("reconstruction round trip", Box::new(|| reconstruction(golden))),
        ("unimodular invariance", Box::new(unimodular_invariance)),
    ];
    let (mut passed, mut known, mut failed) = (0, 0, 0);
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => {
                passed += 1;
                println!("criterion {:>2} PASS  {name} [{secs:.2}s]: {detail}", n + 1);
            }
            Err(detail) => {
                let (tag, detail) = match detail.strip_prefix("KNOWN ") {
                    Some(d) => {
                        known += 1;
                        ("FAIL", format!("{d} (documented)"))
                    }
                    None => {
                        failed += 1;
                        ("FAIL", detail)
                    }
                };
                println!("criterion {:>2} {tag}  {name} [{secs:.2}s]: {detail}", n + 1);
            }
        }
    }
    println!("acceptance: {passed} passed, {} failed ({known} documented)", known + failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

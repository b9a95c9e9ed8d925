//! The acceptance suite. Every criterion reports its checks as
//! `observed <= bound` and fails when a check fails or the run exceeds its
//! time budget.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use anyhow::Result;
use num_complex::Complex64;
use oshima_core::finite_part::{finite_part, laurent_at_minus_one, AbsPower, BumpProfile, PolynomialBump, Profile};
use oshima_core::fixed_points::{det_one_minus, determinant_pair, fixed_point_records, Location, Space, Subgroup};
use oshima_core::haar::{from_iwasawa, haar_quadrature, invariance_defect, GroupTestFunction, HaarDensity};
use oshima_core::lie_structure::{
    m_group, m_theta_components, orbit_census, parabolic_data, q_vector, restricted_roots, root_space_basis,
    ParabolicData, RestrictedRoot, ThetaSubset,
};
use oshima_core::quadrature::Axis;
use oshima_core::sphere::{self, Conjugacy, Orbit, SpherePoint};
use oshima_core::trace::{apply_pi_f, kernel_apply, relative_error};
use oshima_core::{AlgebraElement, GroupElement, SquareMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{flagship_functions, AtlasConfig, CharacterConfig, VerifyConfig};
use crate::experiments::run_character_experiment;
use crate::report::Check;

/// Panels per axis on the kernel side of the kernel oracle.
pub const KERNEL_PANELS: usize = 12;

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub resolution: usize,
    pub seed: u64,
}

impl From<&VerifyConfig> for Settings {
    fn from(c: &VerifyConfig) -> Self {
        Self {
            resolution: c.resolution,
            seed: c.seed,
        }
    }
}

struct Criterion {
    id: u8,
    title: &'static str,
    budget_seconds: f64,
    run: fn(&Settings) -> Result<Vec<Check>>,
}

const CRITERIA: [Criterion; 8] = [
    Criterion {
        id: 1,
        title: "structure fixtures for sl(3)",
        budget_seconds: 1.0,
        run: structure_fixtures,
    },
    Criterion {
        id: 2,
        title: "chart vs adjoint determinants at fixed cosets",
        budget_seconds: 30.0,
        run: determinant_identity,
    },
    Criterion {
        id: 3,
        title: "six simple fixed flags of regular split elements",
        budget_seconds: 10.0,
        run: weyl_count,
    },
    Criterion {
        id: 4,
        title: "sphere trichotomy and closed forms of det(1 - dphi)",
        budget_seconds: 10.0,
        run: sphere_trichotomy,
    },
    Criterion {
        id: 5,
        title: "haar invariance and kernel oracle",
        budget_seconds: 120.0,
        run: haar_validation,
    },
    Criterion {
        id: 6,
        title: "character formula and regularized trace",
        budget_seconds: 600.0,
        run: character_formula,
    },
    Criterion {
        id: 7,
        title: "finite-part continuation",
        budget_seconds: 5.0,
        run: finite_part_continuation,
    },
    Criterion {
        id: 8,
        title: "fixed points in the open orbits",
        budget_seconds: 5.0,
        run: open_orbit_uniqueness,
    },
];

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub budget_seconds: f64,
    pub within_budget: bool,
    pub checks: Vec<Check>,
    pub passed: bool,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CriterionOutcome {
    /// `PASS [k] title (elapsed / budget)` followed by any failing checks.
    pub fn summary(&self) -> String {
        let mut out = format!(
            "{} [{}] {} ({:.2} s / {} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.budget_seconds
        );
        if !self.within_budget {
            out.push_str("\n    over time budget");
        }
        for c in self.checks.iter().filter(|c| !c.passed) {
            out.push_str(&format!("\n    {}: {:e} > {:e}", c.label, c.observed, c.bound));
        }
        out
    }
}

pub fn criterion_ids() -> Vec<u8> {
    CRITERIA.iter().map(|c| c.id).collect()
}

pub fn run_criterion(id: u8, settings: &Settings) -> CriterionOutcome {
    let criterion = CRITERIA
        .iter()
        .find(|c| c.id == id)
        .unwrap_or_else(|| panic!("no acceptance criterion {id}"));
    let started = Instant::now();
    let checks = match (criterion.run)(settings) {
        Ok(checks) => checks,
        Err(e) => vec![Check::failed(format!("error: {e:#}"))],
    };
    let elapsed = started.elapsed();
    let within_budget = elapsed.as_secs_f64() <= criterion.budget_seconds;
    CriterionOutcome {
        id,
        title: criterion.title,
        budget_seconds: criterion.budget_seconds,
        within_budget,
        passed: within_budget && !checks.is_empty() && checks.iter().all(|c| c.passed),
        checks,
        elapsed,
    }
}

fn rng(settings: &Settings, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(settings.seed);
    r.set_stream(stream);
    r
}

fn e3(i: usize, j: usize) -> AlgebraElement {
    AlgebraElement::elementary(3, i - 1, j - 1)
}

fn is_exactly(g: &GroupElement, rows: &[Vec<f64>]) -> bool {
    g.matrix().is_integral() && SquareMatrix::from_rows(rows).is_ok_and(|m| g.matrix() == &m)
}

fn structure_fixtures(_: &Settings) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let system = restricted_roots(3)?;
    let h = AlgebraElement::diagonal(&[2.0, -5.0, 3.0]);
    let bad_root_spaces = system
        .all()
        .iter()
        .filter(|alpha| {
            let x = root_space_basis(alpha, 3).expect("root of sl(3)");
            !(x == e3(alpha.i, alpha.j) && h.bracket(&x) == x.scale(alpha.evaluate(&h)))
        })
        .count();
    checks.push(Check::mismatches("root spaces g^(ei-ej) = R E_ij", bad_root_spaces));
    let names = |v: Vec<RestrictedRoot>| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    checks.push(Check::mismatches(
        "positive and simple roots",
        usize::from(names(system.positive()) != ["e1-e2", "e2-e3", "e1-e3"])
            + usize::from(names(system.simple()) != ["e1-e2", "e2-e3"]),
    ));

    let a12 = RestrictedRoot::new(1, 2)?;
    let data = parabolic_data(&ThetaSubset::new(3, &[a12])?)?;
    let algebra_fixtures = [
        ("n+(e1-e2)", &data.levi_n_plus, vec![e3(1, 2)]),
        ("n-(e1-e2)", &data.levi_n_minus, vec![e3(2, 1)]),
        ("n+_(e1-e2)", &data.nilradical_plus, vec![e3(2, 3), e3(1, 3)]),
        ("n-_(e1-e2)", &data.nilradical_minus, vec![e3(3, 2), e3(3, 1)]),
        (
            "a(e1-e2)",
            &data.levi_a,
            vec![AlgebraElement::diagonal(&[1.0, -1.0, 0.0])],
        ),
        (
            "a_(e1-e2)",
            &data.center_a,
            vec![AlgebraElement::diagonal(&[1.0, 1.0, -2.0])],
        ),
    ];
    for (label, got, expected) in algebra_fixtures {
        let integral = got.iter().all(|x| x.matrix().is_integral());
        checks.push(Check::mismatches(label, usize::from(!(integral && *got == expected))));
    }
    checks.push(Check::mismatches(
        "Q_(e1-e2) = diag(1,-1,0)",
        usize::from(q_vector(&a12, 3)? != AlgebraElement::diagonal(&[1.0, -1.0, 0.0])),
    ));

    let group = |basis: &[AlgebraElement], params: &[f64]| ParabolicData::subgroup_element(basis, params);
    let (x, y, z) = (3.0, -2.0, 5.0);
    let group_fixtures = [
        (
            "N+(e1-e2)",
            group(&data.levi_n_plus, &[x])?,
            vec![vec![1.0, x, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        ),
        (
            "N-(e1-e2)",
            group(&data.levi_n_minus, &[x])?,
            vec![vec![1.0, 0.0, 0.0], vec![x, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        ),
        (
            "N+_(e1-e2)",
            group(&data.nilradical_plus, &[z, y])?,
            vec![vec![1.0, 0.0, y], vec![0.0, 1.0, z], vec![0.0, 0.0, 1.0]],
        ),
        (
            "N-_(e1-e2)",
            group(&data.nilradical_minus, &[z, y])?,
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![y, z, 1.0]],
        ),
    ];
    for (label, g, rows) in group_fixtures {
        checks.push(Check::mismatches(label, usize::from(!is_exactly(&g, &rows))));
    }
    let a = 3.0f64;
    let a_levi = group(&data.levi_a, &[a.ln()])?;
    let a_center = group(&data.center_a, &[a.ln()])?;
    let diag_err = |g: &GroupElement, d: [f64; 3]| {
        GroupElement::diagonal(&d)
            .map(|e| g.distance(&e))
            .unwrap_or(f64::INFINITY)
    };
    checks.push(Check::at_most(
        "A(e1-e2) = diag(a, 1/a, 1)",
        diag_err(&a_levi, [a, 1.0 / a, 1.0]),
        1e-12,
    ));
    checks.push(Check::at_most(
        "A_(e1-e2) = diag(a, a, 1/a^2)",
        diag_err(&a_center, [a, a, a.powi(-2)]),
        1e-12,
    ));

    let mut m: Vec<Vec<f64>> = m_group(3)?
        .iter()
        .map(|g| (0..3).map(|i| g.get(i, i)).collect())
        .collect();
    m.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    let mut expected_m = vec![
        vec![1.0, 1.0, 1.0],
        vec![1.0, -1.0, -1.0],
        vec![-1.0, 1.0, -1.0],
        vec![-1.0, -1.0, 1.0],
    ];
    expected_m.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
    checks.push(Check::mismatches(
        "M has the four sign matrices",
        usize::from(m != expected_m),
    ));
    let components = m_theta_components(&data.theta)?;
    let flip = GroupElement::diagonal(&[1.0, -1.0, -1.0])?;
    checks.push(Check::mismatches(
        "M_(e1-e2)(K) has two components",
        usize::from(components.len() != 2 || !components.contains(&flip)),
    ));
    let census: Vec<usize> = orbit_census(3)?.iter().map(|c| c.multiplicity).collect();
    checks.push(Check::mismatches(
        "census multiplicities 1, 2, 2, 4",
        usize::from(census != [1, 2, 2, 4]),
    ));
    Ok(checks)
}

fn random_sl2(rng: &mut ChaCha8Rng) -> GroupElement {
    from_iwasawa(
        rng.gen_range(-PI..PI),
        rng.gen_range(-1.0..1.0),
        rng.gen_range(-1.5..1.5),
    )
}

fn random_sl3(rng: &mut ChaCha8Rng) -> GroupElement {
    let mut rows: Vec<Vec<f64>> = (0..3)
        .map(|_| (0..3).map(|_| rng.gen_range(-0.6..0.6)).collect())
        .collect();
    let shift = (rows[0][0] + rows[1][1] + rows[2][2]) / 3.0;
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] -= shift;
    }
    AlgebraElement::from_rows(&rows).expect("traceless").exp()
}

fn angle_away_from_zero_and_pi(rng: &mut ChaCha8Rng, margin: f64) -> f64 {
    let theta = rng.gen_range(margin..PI - margin);
    if rng.gen_bool(0.5) {
        theta
    } else {
        -theta
    }
}

/// Diagonal entries with determinant one, a random sign pattern and
/// logarithms of the absolute values pairwise at least `gap` apart.
fn regular_diagonal(rng: &mut ChaCha8Rng, gap: f64) -> [f64; 3] {
    loop {
        let a: f64 = rng.gen_range(-1.0..1.0);
        let b: f64 = rng.gen_range(-1.0..1.0);
        let logs = [a, b, -a - b];
        let separated = (0..3).all(|i| (i + 1..3).all(|j| (logs[i] - logs[j]).abs() >= gap));
        if !separated {
            continue;
        }
        let signs = match rng.gen_range(0..4) {
            0 => [1.0, 1.0, 1.0],
            1 => [1.0, -1.0, -1.0],
            2 => [-1.0, 1.0, -1.0],
            _ => [-1.0, -1.0, 1.0],
        };
        return [0, 1, 2].map(|i| signs[i] * logs[i].exp());
    }
}

fn upper_unipotent(rng: &mut ChaCha8Rng, n: usize) -> GroupElement {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Equal => 1.0,
                    std::cmp::Ordering::Greater => rng.gen_range(-1.0..1.0),
                    std::cmp::Ordering::Less => 0.0,
                })
                .collect()
        })
        .collect();
    GroupElement::from_rows(&rows).expect("unipotent")
}

fn determinant_identity(settings: &Settings) -> Result<Vec<Check>> {
    const PER_FAMILY: usize = 70;
    let mut rng = rng(settings, 2);
    let mut checks = Vec::new();
    let mut total = 0;
    let families: [(&str, Subgroup); 3] = [
        ("SL(2)/K", Subgroup::Compact),
        ("SL(2)/P", Subgroup::MinimalParabolic),
        ("SL(3)/P", Subgroup::MinimalParabolic),
    ];
    for (index, (label, subgroup)) in families.into_iter().enumerate() {
        let mut worst: f64 = 0.0;
        for _ in 0..PER_FAMILY {
            let (x, h) = match index {
                0 => (
                    random_sl2(&mut rng),
                    from_iwasawa(angle_away_from_zero_and_pi(&mut rng, 0.3), 0.0, 0.0),
                ),
                1 => {
                    let lambda: f64 = rng.gen_range(1.3..3.0);
                    let lambda = if rng.gen_bool(0.5) { lambda } else { 1.0 / lambda };
                    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    let d = GroupElement::diagonal(&[sign * lambda, sign / lambda])?;
                    (random_sl2(&mut rng), &d * &upper_unipotent(&mut rng, 2))
                }
                _ => {
                    let d = GroupElement::diagonal(&regular_diagonal(&mut rng, 0.2))?;
                    (random_sl3(&mut rng), &d * &upper_unipotent(&mut rng, 3))
                }
            };
            let g = &(&x * &h) * &x.inverse();
            let (chart, ad) = determinant_pair(&g, &x, subgroup)?;
            worst = worst.max((chart - ad).abs() / ad.abs());
            total += 1;
        }
        checks.push(Check::at_most(
            format!("{label}: relative determinant gap"),
            worst,
            1e-6,
        ));
    }
    checks.push(Check::mismatches(
        "instances short of 200",
        200usize.saturating_sub(total),
    ));
    Ok(checks)
}

fn weyl_count(settings: &Settings) -> Result<Vec<Check>> {
    let mut rng = rng(settings, 3);
    let (mut wrong_count, mut degenerate, mut not_invariant) = (0, 0, 0);
    let mut worst_gap: f64 = 0.0;
    for _ in 0..50 {
        let x = random_sl3(&mut rng);
        let d = GroupElement::diagonal(&regular_diagonal(&mut rng, 0.2))?;
        let g = &(&x * &d) * &x.inverse();
        let records = fixed_point_records(&g, Space::FlagManifold)?;
        wrong_count += usize::from(records.len() != 6);
        for r in &records {
            degenerate += usize::from(!r.transversal);
            if let Location::Flag(flag) = &r.location {
                not_invariant += usize::from(flag.invariance_residual(&g) > 1e-8 || flag.nesting_residual() > 1e-8);
            }
            worst_gap = worst_gap.max((r.det_chart - r.det_ad).abs() / r.det_ad.abs());
        }
    }
    Ok(vec![
        Check::mismatches("elements without exactly 6 fixed flags", wrong_count),
        Check::mismatches("non-simple fixed flags", degenerate),
        Check::mismatches("flags not g-invariant", not_invariant),
        Check::at_most("relative determinant gap at the flags", worst_gap, 1e-6),
    ])
}

/// Classification from the discriminant `(a - d)² + 4bc` of the
/// characteristic polynomial; `None` when too close to call.
fn discriminant_class(g: &GroupElement) -> Option<Conjugacy> {
    let (a, b, c, d) = (g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1));
    let disc = (a - d).powi(2) + 4.0 * b * c;
    if disc > 1e-9 {
        Some(Conjugacy::Hyperbolic)
    } else if disc < -1e-9 {
        Some(Conjugacy::Elliptic)
    } else {
        None
    }
}

fn sphere_trichotomy(settings: &Settings) -> Result<Vec<Check>> {
    let mut rng = rng(settings, 4);
    let mut misclassified = 0;
    let mut ambiguous = 0;
    let mut wrong_fixed_set = 0;
    let mut worst_residual: f64 = 0.0;
    let mut worst_closed_form: f64 = 0.0;
    let mut worst_fd: f64 = 0.0;
    for i in 0..1000 {
        let (g, expected) = if i % 5 == 0 {
            let t: f64 = rng.gen_range(0.3..2.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let n = GroupElement::from_rows(&[vec![sign, sign * t], vec![0.0, sign]])?;
            let x = random_sl2(&mut rng);
            (&(&x * &n) * &x.inverse(), Some(Conjugacy::Parabolic))
        } else {
            let a: f64 = rng.gen_range(-2.0..2.0);
            let b: f64 = rng.gen_range(-2.0..2.0);
            let c: f64 = rng.gen_range(-2.0..2.0);
            if a.abs() < 0.2 {
                continue;
            }
            let g = GroupElement::from_rows(&[vec![a, b], vec![c, (1.0 + b * c) / a]])?;
            let class = discriminant_class(&g);
            (g, class)
        };
        let Some(expected) = expected else {
            ambiguous += 1;
            continue;
        };
        let class = sphere::classify(&g)?;
        misclassified += usize::from(class != expected);
        let fixed = sphere::fixed_points_on_sphere(&g)?;
        let orbits: Vec<Orbit> = fixed.iter().map(|p| p.orbit).collect();
        let shape_ok = match expected {
            Conjugacy::Hyperbolic => {
                orbits == [Orbit::Boundary, Orbit::Boundary] && fixed.iter().all(|p| p.transversal)
            }
            Conjugacy::Elliptic => {
                orbits.len() == 2
                    && orbits.contains(&Orbit::Upper)
                    && orbits.contains(&Orbit::Lower)
                    && fixed.iter().all(|p| p.transversal)
            }
            Conjugacy::Parabolic => orbits == [Orbit::Boundary] && !fixed[0].transversal,
        };
        wrong_fixed_set += usize::from(!shape_ok);
        for p in &fixed {
            worst_residual = worst_residual.max(sphere::act(&g, &p.point).chordal_distance(&p.point));
        }
        let tr = g.trace();
        let closed_forms: Vec<f64> = match expected {
            // 2cos θ = tr
            Conjugacy::Elliptic => vec![4.0 - tr * tr; 2],
            Conjugacy::Hyperbolic => {
                let lambda = 0.5 * (tr + tr.signum() * (tr * tr - 4.0).sqrt());
                let mut v = vec![(1.0 - lambda.powi(-2)).powi(2), (1.0 - lambda.powi(2)).powi(2)];
                v.sort_by(f64::total_cmp);
                v
            }
            Conjugacy::Parabolic => continue,
        };
        let mut library: Vec<f64> = fixed.iter().map(|p| p.det_one_minus_dphi).collect();
        let mut fd = fixed
            .iter()
            .map(|p| Ok(det_one_minus(&sphere::dphi_finite_difference(&g, &p.point)?)))
            .collect::<Result<Vec<f64>>>()?;
        library.sort_by(f64::total_cmp);
        fd.sort_by(f64::total_cmp);
        for ((exact, lib), num) in closed_forms.iter().zip(&library).zip(&fd) {
            worst_closed_form = worst_closed_form.max(relative_error(*exact, *lib));
            worst_fd = worst_fd.max(relative_error(*exact, *num));
        }
    }
    Ok(vec![
        Check::mismatches("samples too close to |tr| = 2 to classify", ambiguous),
        Check::mismatches("misclassified elements", misclassified),
        Check::mismatches("wrong fixed-point count, orbit or transversality", wrong_fixed_set),
        Check::at_most("fixed-point residual (chordal)", worst_residual, 1e-9),
        Check::at_most("det(1 - dphi) vs 4sin^2 / (1 - lambda^-+2)^2", worst_closed_form, 1e-9),
        Check::at_most("finite-difference det(1 - dphi) vs closed form", worst_fd, 1e-6),
    ])
}

fn sphere_bump(z: Option<Complex64>, f: impl Fn(Complex64) -> f64, at_infinity: f64) -> f64 {
    z.map_or(at_infinity, f)
}

fn haar_validation(settings: &Settings) -> Result<Vec<Check>> {
    let integrands = [
        GroupTestFunction::new([PI / 2.0, 0.0, 0.0], [0.3, 0.3, 0.3])?,
        GroupTestFunction::new([0.0, 2.0, 0.0], [0.3, 0.5, 0.3])?,
        GroupTestFunction::new([-1.0, -0.5, 0.8], [0.4, 0.35, 0.5])?,
    ];
    let translates = [
        from_iwasawa(0.4, 0.3, -0.2),
        from_iwasawa(-1.3, -0.5, 0.6),
        from_iwasawa(2.5, 0.6, 0.3),
        from_iwasawa(0.0, -0.4, -0.8),
        from_iwasawa(-2.8, 0.2, 0.7),
    ];
    let mut worst: f64 = 0.0;
    for f in &integrands {
        for h in &translates {
            worst = worst.max(invariance_defect(f, h, settings.resolution, HaarDensity::VALIDATED)?);
        }
    }

    let f = integrands[0];
    let grid = haar_quadrature(&f, settings.resolution)?;
    let points = [
        (0.0, 1.0),
        (0.5, 0.7),
        (-1.2, 2.0),
        (2.0, 0.3),
        (-0.3, 1.5),
        (0.2, -1.0),
        (-0.8, -0.5),
        (1.5, -2.5),
        (0.0, -0.4),
        (-2.0, -1.2),
    ];
    let inputs: [fn(&SpherePoint) -> f64; 3] = [
        |p| {
            sphere_bump(
                p.z(),
                |z| (-(z.re - 0.3).powi(2) - (z.im.abs() - 1.0).powi(2)).exp(),
                0.0,
            )
        },
        |p| sphere_bump(p.z(), |z| 1.0 / (1.0 + z.norm_sqr()), 0.0),
        |p| sphere_bump(p.z(), |z| 1.0 + z.re / (1.0 + z.norm_sqr()), 1.0),
    ];
    let mut worst_kernel: f64 = 0.0;
    for u in inputs {
        for &(re, im) in &points {
            let x = SpherePoint::from_z(Complex64::new(re, im));
            let by_group = apply_pi_f(&grid, &f, u, &x)?;
            let by_kernel = kernel_apply(&f, u, &x, KERNEL_PANELS)?;
            worst_kernel = worst_kernel.max(relative_error(by_kernel, by_group));
        }
    }
    Ok(vec![
        Check::at_most("left-invariance defect, 5 translates x 3 integrands", worst, 1e-6),
        Check::at_most("kernel oracle, 10 points x 3 inputs", worst_kernel, 1e-4),
    ])
}

pub fn flagship_config(resolution: usize) -> CharacterConfig {
    CharacterConfig {
        functions: flagship_functions(),
        s_values: vec![1.0, 0.0, -1.0],
        resolution,
        tolerance: 1e-3,
        atlas: AtlasConfig::default(),
        regularized: true,
    }
}

fn character_formula(settings: &Settings) -> Result<Vec<Check>> {
    let run = run_character_experiment(&flagship_config(settings.resolution))?;
    Ok(run
        .result
        .rows
        .iter()
        .map(|r| {
            let label = match r.quantity {
                "trace_reg" => format!("{}: trace_reg vs direct(s = -1)", r.function),
                _ => format!("{}: s = {}", r.function, r.s),
            };
            Check::at_most(label, r.rel_err, r.tolerance)
        })
        .collect())
}

/// `(1/2πi) ∮ F` over the circle of radius `radius` around `centre`, by the
/// trapezoidal rule.
fn contour_residue<P: Profile>(phi: &P, centre: f64, radius: f64) -> f64 {
    const NODES: usize = 128;
    let sum: Complex64 = (0..NODES)
        .map(|k| {
            let w = Complex64::from_polar(radius, 2.0 * PI * k as f64 / NODES as f64);
            finite_part(phi, Complex64::new(centre, 0.0) + w).value * w
        })
        .sum();
    (sum / NODES as f64).re
}

/// `φ''(0)` by central differences with one Richardson step.
fn second_derivative_at_zero<P: Profile>(phi: &P) -> f64 {
    let d = |h: f64| (phi.eval(h) - 2.0 * phi.eval(0.0) + phi.eval(-h)) / (h * h);
    let h = 2e-3;
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

/// `∫_{-1}^{1} |t| p(t) (1 - t²)^m dt` from the binomial expansion.
fn polynomial_bump_first_moment(poly: &[f64], m: u32) -> f64 {
    let binomial = |m: u32, j: u32| (0..j).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64);
    poly.iter()
        .enumerate()
        .filter(|(k, _)| k % 2 == 0)
        .map(|(k, p)| {
            let integral: f64 = (0..=m)
                .map(|j| {
                    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial(m, j) / (k as f64 + 2.0 * j as f64 + 2.0)
                })
                .sum();
            2.0 * p * integral
        })
        .sum()
}

fn finite_part_continuation(_: &Settings) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let bump = BumpProfile::unit(1.0);

    let at = |s: f64| finite_part(&bump, Complex64::new(s, 0.0));
    let two_phi0 = 2.0 * bump.eval(0.0);
    let pole_m1 = at(-1.0).pole.map_or(f64::NAN, |p| p.residue);
    checks.push(Check::at_most(
        "pole record at -1 vs 2 phi(0)",
        (pole_m1 - two_phi0).abs(),
        1e-8,
    ));
    checks.push(Check::at_most(
        "contour residue at -1 vs 2 phi(0)",
        (contour_residue(&bump, -1.0, 0.5) - two_phi0).abs(),
        1e-8,
    ));

    let phi2 = second_derivative_at_zero(&bump);
    let pole_m3 = at(-3.0).pole.map_or(f64::NAN, |p| p.residue);
    checks.push(Check::at_most(
        "pole record at -3 vs phi''(0)",
        relative_error(phi2, pole_m3),
        1e-6,
    ));
    checks.push(Check::at_most(
        "contour residue at -3 vs phi''(0)",
        relative_error(phi2, contour_residue(&bump, -3.0, 0.5)),
        1e-6,
    ));

    let squared = BumpProfile::with_poly(1.0, vec![0.0, 0.0, 1.0]);
    checks.push(Check::mismatches(
        "t^2 phi has no pole at -1",
        usize::from(finite_part(&squared, Complex64::new(-1.0, 0.0)).pole.is_some()),
    ));

    let poly = vec![1.0, 0.5, -2.0, 0.25];
    let polynomial = PolynomialBump {
        poly: poly.clone(),
        power: 3,
    };
    let exact = polynomial_bump_first_moment(&poly, 3);
    let value = finite_part(&polynomial, Complex64::new(1.0, 0.0)).value.re;
    checks.push(Check::at_most(
        "polynomial bump at s = 1 vs exact",
        relative_error(exact, value),
        1e-10,
    ));

    let psi = BumpProfile::unit(0.8);
    let integral = Axis::panels(-0.8, 0.8, 64, 12).integrate(|t| psi.eval(t));
    let weighted = AbsPower { power: 1, inner: psi };
    let laurent = laurent_at_minus_one(&weighted, 1);
    checks.push(Check::at_most(
        "S0(|t| psi) vs integral of psi",
        relative_error(integral, laurent.coefficient(0)),
        1e-8,
    ));
    checks.push(Check::at_most("S-1(|t| psi)", laurent.coefficient(-1).abs(), 1e-12));

    let h = 1e-4;
    let mut worst_cr: f64 = 0.0;
    for i in -1..=1 {
        for j in -1..=1 {
            let s = Complex64::new(0.5 + 0.25 * i as f64, 0.5 + 0.25 * j as f64);
            let f = |ds: Complex64| finite_part(&bump, s + ds).value;
            let dx = (f(Complex64::new(h, 0.0)) - f(Complex64::new(-h, 0.0))) / (2.0 * h);
            let dy = (f(Complex64::new(0.0, h)) - f(Complex64::new(0.0, -h))) / (2.0 * h);
            worst_cr = worst_cr.max((dy - Complex64::i() * dx).norm() / dx.norm());
        }
    }
    checks.push(Check::at_most(
        "Cauchy-Riemann residual around 0.5 + 0.5i",
        worst_cr,
        1e-6,
    ));
    Ok(checks)
}

fn open_orbit_uniqueness(settings: &Settings) -> Result<Vec<Check>> {
    let mut rng = rng(settings, 8);
    let (mut elliptic_wrong, mut hyperbolic_wrong) = (0, 0);
    let mut worst_location: f64 = 0.0;
    let i = SpherePoint::from_z(Complex64::new(0.0, 1.0));
    let minus_i = SpherePoint::from_z(Complex64::new(0.0, -1.0));
    for k in 0..500 {
        let x = random_sl2(&mut rng);
        let elliptic = k % 2 == 0;
        let core = if elliptic {
            from_iwasawa(angle_away_from_zero_and_pi(&mut rng, 0.1), 0.0, 0.0)
        } else {
            let lambda: f64 = rng.gen_range(1.1..4.0);
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            GroupElement::diagonal(&[sign * lambda, sign / lambda])?
        };
        let g = &(&x * &core) * &x.inverse();
        let fixed = sphere::fixed_points_on_sphere(&g)?;
        let upper: Vec<&SpherePoint> = fixed
            .iter()
            .filter(|p| p.orbit == Orbit::Upper)
            .map(|p| &p.point)
            .collect();
        let lower: Vec<&SpherePoint> = fixed
            .iter()
            .filter(|p| p.orbit == Orbit::Lower)
            .map(|p| &p.point)
            .collect();
        if elliptic {
            if upper.len() != 1 || lower.len() != 1 {
                elliptic_wrong += 1;
                continue;
            }
            // k fixes ±i, so x k x⁻¹ fixes x·(±i)
            worst_location = worst_location
                .max(upper[0].chordal_distance(&sphere::act(&x, &i)))
                .max(lower[0].chordal_distance(&sphere::act(&x, &minus_i)));
        } else {
            hyperbolic_wrong += usize::from(!(upper.is_empty() && lower.is_empty()));
        }
    }
    Ok(vec![
        Check::mismatches(
            "elliptic elements without one fixed point per open orbit",
            elliptic_wrong,
        ),
        Check::mismatches(
            "hyperbolic elements with a fixed point in an open orbit",
            hyperbolic_wrong,
        ),
        Check::at_most("distance to x(+-i)", worst_location, 1e-9),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_moment_oracle() {
        // ∫|t|(1 - t²) = 2(1/2 - 1/4)
        assert!((polynomial_bump_first_moment(&[1.0], 1) - 0.5).abs() < 1e-15);
        // odd coefficients integrate to zero against |t|
        assert_eq!(polynomial_bump_first_moment(&[0.0, 3.0], 2), 0.0);
    }

    #[test]
    fn discriminant_classes() {
        let rot = from_iwasawa(1.0, 0.0, 0.0);
        assert_eq!(discriminant_class(&rot), Some(Conjugacy::Elliptic));
        let d = GroupElement::diagonal(&[2.0, 0.5]).unwrap();
        assert_eq!(discriminant_class(&d), Some(Conjugacy::Hyperbolic));
        let u = GroupElement::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(discriminant_class(&u), None);
    }

    #[test]
    fn regular_diagonals_are_unimodular_and_separated() {
        let mut r = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let d = regular_diagonal(&mut r, 0.2);
            assert!((d.iter().product::<f64>() - 1.0).abs() < 1e-12);
            for i in 0..3 {
                for j in i + 1..3 {
                    assert!((d[i].abs().ln() - d[j].abs().ln()).abs() >= 0.2 - 1e-12);
                }
            }
        }
    }
}

//! Acceptance suite: ten criteria, each with a tolerance and a runtime
//! budget. Prints one PASS/FAIL line per criterion and exits nonzero if any
//! fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{shannon, variance, JointTable};
use lossinfo::continuous::{
    continuous_information, demonstrate_entropy_divergence, hyvarinen_information,
    hyvarinen_witness_score, logloss_witness_quadrature, logloss_witness_value, Grid,
    JointGridDensity, WitnessFamily,
};
use lossinfo::losses::{ExponentialSum, NegativeEntropy, SquaredNorm};
use lossinfo::{
    bayes_act, belief_decomposition, check_pythagoras, check_telescope, conditional_entropy,
    conditional_entropy_as_divergence, conditional_expectation, conditional_information,
    conditional_information_as_divergence, entropy, entropy_as_divergence, information,
    information_as_divergence, lattice_sweep, ConvexGenerator, ExtendedReal, LossModel,
    RandomElement, SampleSpace, WeightedStates,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn finite(v: ExtendedReal) -> f64 {
    v.finite().expect("finite quantity")
}

/// Tracks the largest error seen and the first violation.
struct Worst {
    label: &'static str,
    tolerance: f64,
    max: f64,
    failure: Option<String>,
}

impl Worst {
    fn new(label: &'static str, tolerance: f64) -> Worst {
        Worst {
            label,
            tolerance,
            max: 0.0,
            failure: None,
        }
    }

    fn record(&mut self, error: f64, context: impl FnOnce() -> String) {
        let error = if error.is_nan() { f64::INFINITY } else { error };
        if error > self.max {
            self.max = error;
        }
        if error >= self.tolerance && self.failure.is_none() {
            self.failure = Some(format!("{} = {error:.3e} at {}", self.label, context()));
        }
    }

    fn finish(self) -> Check {
        match self.failure {
            Some(f) => Err(f),
            None => Ok(format!(
                "max {} {:.2e} < {:.0e}",
                self.label, self.max, self.tolerance
            )),
        }
    }
}

fn join(results: Vec<Check>) -> Check {
    let mut parts = Vec::new();
    for r in results {
        parts.push(r?);
    }
    Ok(parts.join("; "))
}

fn random_dims(rng: &mut ChaCha8Rng, limits: &[usize]) -> Vec<usize> {
    limits.iter().map(|&m| rng.random_range(1..=m)).collect()
}

fn shannon_equivalence() -> Check {
    let mut rng = common::rng(1001);
    let mut worst = Worst::new("abs error", 1e-9);
    for case in 0..200 {
        let dims = random_dims(&mut rng, &[8, 8, 4]);
        let t = JointTable::random(&mut rng, dims, 0.1);
        let space = t.space();
        let x = t.symbols(0);
        let loss = LossModel::log_loss(t.dims[0]);
        let (y, z) = (t.partition(&[1]), t.partition(&[2]));
        let pairs = [
            (entropy(&space, &x, &loss), shannon::entropy(&t, 0)),
            (
                conditional_entropy(&space, &x, &loss, &y),
                shannon::conditional_entropy(&t, 0, &[1]),
            ),
            (
                information(&space, &x, &loss, &y),
                shannon::mutual_information(&t, 0, 1),
            ),
            (
                conditional_information(&space, &x, &loss, &z, &y),
                shannon::conditional_mutual_information(&t, 0, 1, 2),
            ),
        ];
        for (engine, oracle) in pairs {
            let v = finite(engine.map_err(|e| e.to_string())?.value);
            worst.record((v - oracle).abs(), || format!("table {case} {:?}", t.dims));
        }
    }
    worst.finish()
}

fn variance_equivalence() -> Check {
    let mut rng = common::rng(1002);
    let mut worst = Worst::new("abs error", 1e-9);
    let loss = LossModel::square_error(1);
    for case in 0..200 {
        let dims = random_dims(&mut rng, &[8, 8]);
        let t = JointTable::random(&mut rng, dims, 0.1);
        let embedding: Vec<f64> = (0..t.dims[0])
            .map(|_| rng.random_range(-10.0..10.0))
            .collect();
        let x = t.reals(0, &embedding);
        let values: Vec<f64> = x.values().iter().map(|v| v[0]).collect();
        let labels: Vec<usize> = (0..t.cells()).map(|c| t.coords(c)[1]).collect();
        let (space, y) = (t.space(), t.partition(&[1]));
        let err = |e: lossinfo::Error| e.to_string();

        let var = variance::var(&t.probs, &values);
        let ecv = variance::expected_conditional_variance(&t.probs, &values, &labels);
        let vcm = variance::variance_of_conditional_mean(&t.probs, &values, &labels);
        let h = finite(entropy(&space, &x, &loss).map_err(err)?.value);
        let hc = finite(
            conditional_entropy(&space, &x, &loss, &y)
                .map_err(err)?
                .value,
        );
        let i = finite(information(&space, &x, &loss, &y).map_err(err)?.value);
        let residual = check_telescope(&space, &x, &loss, &y).map_err(err)?;
        let ctx = || format!("scenario {case} {:?}", t.dims);
        worst.record((h - var).abs(), ctx);
        worst.record((hc - ecv).abs(), ctx);
        worst.record((i - vcm).abs(), ctx);
        worst.record(residual, ctx);
        worst.record((var - ecv - vcm).abs(), ctx);
    }
    worst.finish()
}

fn lattice_case(
    space: &SampleSpace,
    x: &RandomElement,
    loss: &LossModel,
    worst: &mut Worst,
    context: &str,
) -> Result<(), String> {
    let summary = lattice_sweep(space, x, loss)
        .and_then(|s| s.summary())
        .map_err(|e| e.to_string())?;
    // Violations are negative gaps; record their magnitude.
    for gap in [
        summary.min_refinement_gap,
        summary.min_maximality_gap,
        summary.min_information,
        summary.entropy,
    ] {
        worst.record((-gap).max(0.0), || {
            format!("{context} under {}", loss.name())
        });
    }
    worst.record(summary.max_plateau_deviation, || {
        format!("{context} plateau under {}", loss.name())
    });
    Ok(())
}

fn lattice_ordering() -> Check {
    let mut rng = common::rng(1003);
    let mut ordering = Worst::new("violation", 1e-9);
    let mut dirac = Worst::new("Dirac H", 1e-12);
    let mut independent = Worst::new("independent I", 1e-12);
    let mut sweeps = 0;
    for n in 1..=6 {
        for trial in 0..20 {
            let probs = common::random_sparse_distribution(&mut rng, n, 0.1);
            let space = SampleSpace::new(probs).map_err(|e| e.to_string())?;
            let symbols: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
            let reals: Vec<f64> = symbols.iter().map(|&s| 2.5 * s as f64 - 1.0).collect();
            let context = format!("n = {n}, trial {trial}");
            let sym = RandomElement::symbols(3, &symbols).unwrap();
            let real = RandomElement::scalar(&reals).unwrap();
            lattice_case(
                &space,
                &real,
                &LossModel::square_error(1),
                &mut ordering,
                &context,
            )?;
            lattice_case(
                &space,
                &sym,
                &LossModel::log_loss(3),
                &mut ordering,
                &context,
            )?;
            sweeps += 2;

            let point = rng.random_range(0..n);
            let delta: Vec<f64> = (0..n).map(|i| if i == point { 1.0 } else { 0.0 }).collect();
            let dirac_space = SampleSpace::new(delta).unwrap();
            for (x, loss) in [
                (&real, LossModel::square_error(1)),
                (&sym, LossModel::log_loss(3)),
            ] {
                let h = finite(
                    entropy(&dirac_space, x, &loss)
                        .map_err(|e| e.to_string())?
                        .value,
                );
                dirac.record(h.abs(), || format!("{context} under {}", loss.name()));
            }
        }
        for a in (1..=n).filter(|a| n % a == 0) {
            let b = n / a;
            for trial in 0..20 {
                let pa = common::random_distribution(&mut rng, a);
                let pb = common::random_distribution(&mut rng, b);
                let probs: Vec<f64> = pa
                    .iter()
                    .flat_map(|u| pb.iter().map(move |v| u * v))
                    .collect();
                let t = JointTable::new(vec![a, b], probs);
                let embedding: Vec<f64> = (0..a).map(|_| rng.random_range(-3.0..3.0)).collect();
                let y = t.partition(&[1]);
                for (x, loss) in [
                    (t.reals(0, &embedding), LossModel::square_error(1)),
                    (t.symbols(0), LossModel::log_loss(a)),
                ] {
                    let i = finite(
                        information(&t.space(), &x, &loss, &y)
                            .map_err(|e| e.to_string())?
                            .value,
                    );
                    independent.record(i.abs(), || {
                        format!("{a}x{b} product, trial {trial}, {}", loss.name())
                    });
                }
            }
        }
    }
    let summary = join(vec![
        ordering.finish(),
        dirac.finish(),
        independent.finish(),
    ])?;
    Ok(format!("{sweeps} lattice sweeps; {summary}"))
}

fn generator(which: usize) -> (Box<dyn ConvexGenerator>, LossModel, f64) {
    match which {
        0 => (
            Box::new(SquaredNorm),
            LossModel::bregman(SquaredNorm, 1),
            -4.0,
        ),
        1 => (
            Box::new(NegativeEntropy),
            LossModel::bregman(NegativeEntropy, 1),
            0.0,
        ),
        _ => (
            Box::new(ExponentialSum),
            LossModel::bregman(ExponentialSum, 1),
            -4.0,
        ),
    }
}

fn bregman_loss(which: usize, dim: usize) -> LossModel {
    match which {
        0 => LossModel::bregman(SquaredNorm, dim),
        1 => LossModel::bregman(NegativeEntropy, dim),
        _ => LossModel::bregman(ExponentialSum, dim),
    }
}

fn bregman_characterization() -> Check {
    let mut rng = common::rng(1004);
    let mut worst = Worst::new("distance to conditional mean", 1e-6);
    let mut solves = 0;
    for which in 0..3 {
        let lower = generator(which).2;
        for case in 0..50 {
            let n = rng.random_range(2..=6);
            let d = rng.random_range(1..=3);
            let space = SampleSpace::new(common::random_distribution(&mut rng, n)).unwrap();
            let values: Vec<Vec<f64>> = (0..n)
                .map(|_| (0..d).map(|_| rng.random_range(0.1..3.0)).collect())
                .collect();
            let x = RandomElement::real(values).unwrap();
            let p = common::random_partition(&mut rng, n, 3);
            let loss = bregman_loss(which, d)
                .without_closed_forms()
                .with_action_bounds(vec![lower; d], vec![4.0; d])
                .map_err(|e| e.to_string())?;
            let cond = conditional_expectation(&space, &x, &p).map_err(|e| e.to_string())?;
            for block in p.blocks() {
                let mass = space.mass(block);
                let states = block.iter().map(|&a| x.value(a).to_vec()).collect();
                let weights = block.iter().map(|&a| space.probability(a) / mass).collect();
                let ws = WeightedStates::new(states, weights).map_err(|e| e.to_string())?;
                let act = bayes_act(&loss, &ws).map_err(|e| e.to_string())?;
                solves += 1;
                let target = cond.value(block[0]);
                let distance = act
                    .action
                    .iter()
                    .zip(target)
                    .map(|(a, t)| (a - t).abs())
                    .fold(0.0, f64::max);
                worst.record(distance, || format!("{} case {case}", loss.name()));
            }
        }
    }
    Ok(format!("{solves} numeric solves; {}", worst.finish()?))
}

fn kl_bridge() -> Check {
    let mut rng = common::rng(1005);
    let mut worst = Worst::new("|H_KL - I_S|", 1e-9);
    for case in 0..100 {
        let dims = vec![rng.random_range(1..=6), rng.random_range(2..=6)];
        let zero_rate = if case % 2 == 0 { 0.0 } else { 0.3 };
        let t = JointTable::random(&mut rng, dims, zero_rate);
        let k = t.dims[1];
        let pz = t.marginal(&[0]);
        let pzy = t.marginal(&[0, 1]);
        let rows: Vec<Vec<f64>> = (0..t.cells())
            .map(|c| {
                let z = t.coords(c)[0];
                let mass = pz[&vec![z]];
                (0..k)
                    .map(|y| {
                        if mass > 0.0 {
                            pzy[&vec![z, y]] / mass
                        } else {
                            1.0 / k as f64
                        }
                    })
                    .collect()
            })
            .collect();
        let law = RandomElement::distributions(rows).map_err(|e| e.to_string())?;
        let space = t.space();
        let h_kl = finite(
            entropy(&space, &law, &LossModel::kl(k))
                .map_err(|e| e.to_string())?
                .value,
        );
        let i_s = finite(
            information(
                &space,
                &t.symbols(1),
                &LossModel::log_loss(k),
                &t.partition(&[0]),
            )
            .map_err(|e| e.to_string())?
            .value,
        );
        worst.record((h_kl - i_s).abs(), || format!("table {case} {:?}", t.dims));
        worst.record((i_s - shannon::mutual_information(&t, 0, 1)).abs(), || {
            format!("table {case} Shannon oracle")
        });
    }
    worst.finish()
}

fn pythagorean_decomposition() -> Check {
    let mut rng = common::rng(1006);
    let mut worst = Worst::new("residual", 1e-9);
    for case in 0..100 {
        let which = case % 3;
        let (phi, _, _) = generator(which);
        let n = rng.random_range(1..=8);
        let d = rng.random_range(1..=3);
        let space = SampleSpace::new(common::random_sparse_distribution(&mut rng, n, 0.1)).unwrap();
        let draw = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..d).map(|_| rng.random_range(0.05..2.5)).collect()
        };
        let x = RandomElement::real((0..n).map(|_| draw(&mut rng)).collect()).unwrap();
        let p = common::random_partition(&mut rng, n, 4);
        let per_block: Vec<Vec<f64>> = (0..p.block_count()).map(|_| draw(&mut rng)).collect();
        let labels = p.labels();
        let y =
            RandomElement::real((0..n).map(|i| per_block[labels[i]].clone()).collect()).unwrap();
        let r = check_pythagoras(&space, &x, phi.as_ref(), &p, &y).map_err(|e| e.to_string())?;
        worst.record(r, || format!("instance {case} with {}", phi.name()));
    }
    worst.finish()
}

fn belief_decomposition_check() -> Check {
    let mut rng = common::rng(1007);
    let mut identity = Worst::new("residual", 1e-9);
    let mut classical = Worst::new("Shannon-term error", 1e-9);
    for case in 0..100 {
        let k = rng.random_range(2..=8);
        let p = common::random_sparse_distribution(&mut rng, k, 0.15);
        let q = common::random_distribution(&mut rng, k);
        let gamma = rng.random_range(1.1..4.0);
        let space = SampleSpace::new(p.clone()).unwrap();
        let x = RandomElement::symbols(k, &(0..k).collect::<Vec<_>>()).unwrap();
        let belief = WeightedStates::over_symbols(&q).unwrap();
        for loss in [
            LossModel::log_loss(k),
            LossModel::tsallis(k, gamma).unwrap(),
        ] {
            let d = belief_decomposition(&space, &x, &loss, &belief).map_err(|e| e.to_string())?;
            let r = d.residual().map_err(|e| e.to_string())?;
            identity.record(r, || format!("pair {case} under {}", loss.name()));
            if loss.is_log_based() {
                let ctx = || format!("pair {case}");
                classical.record(
                    (finite(d.total) - shannon::cross_entropy(&p, &q)).abs(),
                    ctx,
                );
                classical.record((finite(d.relative) - shannon::kl(&p, &q)).abs(), ctx);
                classical.record(
                    (finite(d.entropy_term) - shannon::entropy_of(&p)).abs(),
                    ctx,
                );
            }
        }
    }
    join(vec![identity.finish(), classical.finish()])
}

fn witness() -> Check {
    let mut value = Worst::new("log-loss witness error", 1e-6);
    for n in [1.0, 10.0, 100.0] {
        let exact = logloss_witness_value(n).map_err(|e| e.to_string())?;
        if exact != -(n / PI.sqrt()).ln() {
            return Err(format!("closed form differs at n = {n}"));
        }
        let q = logloss_witness_quadrature(n, None).map_err(|e| e.to_string())?;
        value.record((q - exact).abs(), || format!("n = {n}"));
    }
    let mut score = Worst::new("|score + 1/2|", 1e-9);
    for k in 0..=12 {
        let n = 10f64.powf(k as f64 / 2.0);
        let s = hyvarinen_witness_score(n).map_err(|e| e.to_string())?;
        score.record((s + 0.5).abs(), || format!("n = {n}"));
    }
    let ladder_n = [10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0, 1e4, 1e5, 1e6];
    for family in WitnessFamily::ALL {
        let ladder =
            demonstrate_entropy_divergence(family, &ladder_n, None).map_err(|e| e.to_string())?;
        for w in ladder.windows(2) {
            if w[1].risk_upper_bound.partial_cmp(&w[0].risk_upper_bound)
                != Some(std::cmp::Ordering::Less)
            {
                return Err(format!(
                    "{family} ladder not decreasing between n = {} and n = {}",
                    w[0].n, w[1].n
                ));
            }
        }
    }
    join(vec![
        value.finish(),
        score.finish(),
        Ok("both ladders strictly decreasing for n in [10, 1e6]".into()),
    ])
}

fn gaussian_joint(rho: f64) -> JointGridDensity {
    let g = Grid::new(-5.0, 5.0, 201).unwrap();
    JointGridDensity::from_fn(g, g, |x, y| {
        (-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * (1.0 - rho * rho))).exp()
    })
    .unwrap()
}

fn continuous_information_check() -> Check {
    let mut log_loss = Worst::new("log-loss error", 2e-3);
    let mut score = Worst::new("Hyvarinen error", 5e-3);
    for rho in [0.3, 0.5, 0.8] {
        let joint = gaussian_joint(rho);
        let i = continuous_information(&joint).map_err(|e| e.to_string())?;
        log_loss.record((i + 0.5 * (1.0 - rho * rho).ln()).abs(), || {
            format!("rho = {rho}")
        });
        let h = hyvarinen_information(&joint).map_err(|e| e.to_string())?;
        score.record((h - rho * rho / (1.0 - rho * rho)).abs(), || {
            format!("rho = {rho}")
        });
    }
    let mut product = Worst::new("product-density value", 1e-9);
    let g = Grid::new(-5.0, 5.0, 201).unwrap();
    let shapes: [fn(f64) -> f64; 3] = [
        |t| (-0.5 * t * t).exp(),
        |t| (-(t - 1.0).abs()).exp() + 0.1,
        |t| 1.0 / (1.0 + t * t),
    ];
    for (a, fa) in shapes.iter().enumerate() {
        for (b, fb) in shapes.iter().enumerate() {
            let joint = JointGridDensity::from_fn(g, g, |x, y| fa(x) * fb(y)).unwrap();
            let i = continuous_information(&joint).map_err(|e| e.to_string())?;
            product.record(i.abs(), || format!("shapes ({a}, {b})"));
            let h = hyvarinen_information(&joint).map_err(|e| e.to_string())?;
            product.record(h.abs(), || format!("shapes ({a}, {b}) Hyvarinen"));
        }
    }
    join(vec![log_loss.finish(), score.finish(), product.finish()])
}

fn scoring_representations() -> Check {
    let mut rng = common::rng(1010);
    let mut worst = Worst::new("abs error", 1e-9);
    for case in 0..100 {
        let n = rng.random_range(1..=8);
        let k = rng.random_range(2..=4);
        let space = SampleSpace::new(common::random_sparse_distribution(&mut rng, n, 0.1)).unwrap();
        let symbols: Vec<usize> = (0..n).map(|_| rng.random_range(0..k)).collect();
        let x = RandomElement::symbols(k, &symbols).unwrap();
        let a = common::random_partition(&mut rng, n, 3);
        let b = common::random_partition(&mut rng, n, 3);
        let gamma = rng.random_range(1.1..4.0);
        for loss in [
            LossModel::log_loss(k),
            LossModel::tsallis(k, gamma).unwrap(),
        ] {
            let e = |e: lossinfo::Error| e.to_string();
            let pairs = [
                (
                    entropy_as_divergence(&space, &x, &loss).map_err(e)?,
                    entropy(&space, &x, &loss).map_err(e)?.value,
                ),
                (
                    conditional_entropy_as_divergence(&space, &x, &loss, &a).map_err(e)?,
                    conditional_entropy(&space, &x, &loss, &a).map_err(e)?.value,
                ),
                (
                    information_as_divergence(&space, &x, &loss, &a).map_err(e)?,
                    information(&space, &x, &loss, &a).map_err(e)?.value,
                ),
                (
                    conditional_information_as_divergence(&space, &x, &loss, &a, &b).map_err(e)?,
                    conditional_information(&space, &x, &loss, &a, &b)
                        .map_err(e)?
                        .value,
                ),
            ];
            for (form, definition) in pairs {
                worst.record((finite(form) - finite(definition)).abs(), || {
                    format!("instance {case} under {}", loss.name())
                });
            }
        }
    }
    worst.finish()
}

struct Criterion {
    id: usize,
    name: &'static str,
    budget: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "Shannon equivalence",
            budget: Duration::from_secs(10),
            run: shannon_equivalence,
        },
        Criterion {
            id: 2,
            name: "variance equivalence",
            budget: Duration::from_secs(5),
            run: variance_equivalence,
        },
        Criterion {
            id: 3,
            name: "lattice ordering properties",
            budget: Duration::from_secs(60),
            run: lattice_ordering,
        },
        Criterion {
            id: 4,
            name: "Bregman conditional-mean characterization",
            budget: Duration::from_secs(30),
            run: bregman_characterization,
        },
        Criterion {
            id: 5,
            name: "KL-as-Bregman bridge",
            budget: Duration::from_secs(5),
            run: kl_bridge,
        },
        Criterion {
            id: 6,
            name: "Pythagorean decomposition",
            budget: Duration::from_secs(10),
            run: pythagorean_decomposition,
        },
        Criterion {
            id: 7,
            name: "belief decomposition",
            budget: Duration::from_secs(5),
            run: belief_decomposition_check,
        },
        Criterion {
            id: 8,
            name: "entropy witnesses",
            budget: Duration::from_secs(5),
            run: witness,
        },
        Criterion {
            id: 9,
            name: "continuous information",
            budget: Duration::from_secs(30),
            run: continuous_information_check,
        },
        Criterion {
            id: 10,
            name: "scoring-rule representations",
            budget: Duration::from_secs(10),
            run: scoring_representations,
        },
    ];
    let mut failures = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let timed = match outcome {
            Ok(detail) if elapsed > c.budget => Err(format!("{detail}; over budget")),
            other => other,
        };
        let (tag, detail) = match timed {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {:>2} [{tag}] {}: {detail} ({:.3} s of {} s)",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.budget.as_secs()
        );
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Acceptance gate: one check per criterion, each printing a PASS/FAIL line
//! with its measured values. Exits non-zero if any criterion fails.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use vqkan::decoder::{decode, enumerate_cycles, DecodeMode};
use vqkan::experiment::{self, ExperimentConfig, COMPARE_HEADER};
use vqkan::graph::{hexagon_graph, random_graph, square_graph};
use vqkan::loss::{cost_term, taboo, CostMode, TabooMode};
use vqkan::oracle::{path_length, shortest_cycle};
use vqkan::statevec::StateVector;
use vqkan::vqe::{encode_tour, vqe_energy, VqeModel, VqeProblem};
use vqkan::LayerSnapshots;

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn config(text: &str, out: &Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::from_toml(text, Path::new(".")).expect("valid acceptance config");
    cfg.output_dir = out.to_path_buf();
    cfg
}

fn ac1_gate_algebra() -> Check {
    let t0 = Instant::now();
    let mut worst_cos: f64 = 0.0;
    for i in 0..100 {
        let theta = -2.0 * PI + 4.0 * PI * i as f64 / 99.0;
        let mut s = StateVector::zero(1).unwrap();
        s.apply_ry(0, theta).unwrap();
        worst_cos = worst_cos.max((s.expect_z(0).unwrap() - theta.cos()).abs());
    }
    ensure(worst_cos < 1e-10, || format!("expect_z vs cos error {worst_cos:e}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_comp: f64 = 0.0;
    for _ in 0..200 {
        let mut s = StateVector::zero(3).unwrap();
        for q in 0..3 {
            s.apply_ry(q, rng.random_range(-PI..PI)).unwrap();
        }
        s.apply_pswap(0, 2, rng.random_range(-PI..PI)).unwrap();
        let (q, a, b) = (rng.random_range(0..3), rng.random_range(-7.0..7.0), rng.random_range(-7.0..7.0));
        let mut twice = s.clone();
        twice.apply_ry(q, a).unwrap();
        twice.apply_ry(q, b).unwrap();
        s.apply_ry(q, a + b).unwrap();
        for (x, y) in twice.amplitudes().iter().zip(s.amplitudes()) {
            worst_comp = worst_comp.max((x - y).norm());
        }
    }
    ensure(worst_comp < 1e-10, || format!("Ry composition error {worst_comp:e}"))?;

    // pswap(π) maps every basis state to its bit-exchanged partner up to sign
    let mut worst_swap: f64 = 0.0;
    for (a, b) in [(0, 1), (1, 2), (0, 2), (2, 0)] {
        for idx in 0..8usize {
            let mut s = StateVector::basis(3, idx).unwrap();
            s.apply_pswap(a, b, PI).unwrap();
            let (ba, bb) = ((idx >> a) & 1, (idx >> b) & 1);
            let target = idx & !(1 << a) & !(1 << b) | bb << a | ba << b;
            for (k, amp) in s.amplitudes().iter().enumerate() {
                let want = if k == target { 1.0 } else { 0.0 };
                worst_swap = worst_swap.max((amp.norm() - want).abs());
            }
        }
    }
    ensure(worst_swap < 1e-10, || format!("pswap(π) vs SWAP error {worst_swap:e}"))?;
    within(t0.elapsed(), Duration::from_secs(1))?;
    Ok(format!(
        "cos err {worst_cos:.1e}, composition err {worst_comp:.1e}, swap err {worst_swap:.1e}"
    ))
}

fn ac2_conservation() -> Check {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pairs = vqkan::vqkan::swap_pairs(4);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mut s = StateVector::zero(4).unwrap();
        for q in 0..4 {
            s.apply_ry(q, rng.random_range(-PI..PI)).unwrap();
        }
        let count = |s: &StateVector| s.expect_z_all().iter().map(|z| 0.5 * (1.0 - z)).sum::<f64>();
        let before = count(&s);
        for _layer in 0..3 {
            for &(j, k) in &pairs {
                s.apply_pswap(j, k, rng.random_range(-2.0 * PI..2.0 * PI)).unwrap();
            }
        }
        worst = worst.max((count(&s) - before).abs());
    }
    ensure(worst < 1e-10, || format!("excitation drift {worst:e}"))?;
    within(t0.elapsed(), Duration::from_secs(10))?;
    Ok(format!("max drift {worst:.1e} over 1000 circuits"))
}

fn ac3_oracle_ground_truth() -> Check {
    let t0 = Instant::now();
    let sq = shortest_cycle(&square_graph(0.0), 0).map_err(|e| e.to_string())?;
    ensure(sq.best_path == vec![0, 1, 2, 3, 0], || format!("square path {:?}", sq.best_path))?;
    ensure((sq.best_length - 2.0 * 2f64.sqrt()).abs() < 1e-12, || format!("square length {}", sq.best_length))?;
    let hex = shortest_cycle(&hexagon_graph(), 0).map_err(|e| e.to_string())?;
    ensure(hex.best_path == vec![0, 1, 2, 3, 4, 5, 0], || format!("hexagon path {:?}", hex.best_path))?;
    ensure((hex.best_length - 3.0).abs() < 1e-12, || format!("hexagon length {}", hex.best_length))?;
    within(t0.elapsed(), Duration::from_secs(1))?;
    Ok(format!("square {:.12}, hexagon {}", sq.best_length, hex.best_length))
}

fn ac4_loss_oracle_consistency() -> Check {
    let t0 = Instant::now();
    let mut graphs = vec![square_graph(0.0)];
    graphs.extend((0..20).map(|seed| random_graph(seed, 4, 4).unwrap()));
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for g in &graphs {
        for cycle in enumerate_cycles(4, 0).unwrap() {
            let s = LayerSnapshots::one_hot(&cycle, 4).unwrap();
            let c = cost_term(&s, g, CostMode::Weighted).unwrap();
            worst = worst.max((c - path_length(g, &cycle).unwrap()).abs());
            checked += 1;
        }
    }
    ensure(worst < 1e-12, || format!("cost vs length error {worst:e}"))?;
    within(t0.elapsed(), Duration::from_secs(5))?;
    Ok(format!("{checked} cycle/graph pairs, max error {worst:.1e}"))
}

fn ac5_taboo_property() -> Check {
    let t0 = Instant::now();
    // 5 rows (N_l = 4), each empty or holding one of 4 sites; the taboo
    // compares rows 0..N_l, so disjointness is judged on those rows
    let (nq, rows, taboo_rows) = (4usize, 5usize, 4usize);
    let mut total = 0;
    let mut one_per_step = 0;
    for code in 0..5usize.pow(rows as u32) {
        let mut choice = Vec::with_capacity(rows);
        let mut c = code;
        for _ in 0..rows {
            choice.push(c % 5);
            c /= 5;
        }
        let occ: Vec<Vec<f64>> = choice
            .iter()
            .map(|&ch| (0..nq).map(|j| if ch == j + 1 { 1.0 } else { 0.0 }).collect())
            .collect();
        let value = taboo(&LayerSnapshots::from_occupancy(occ).unwrap(), TabooMode::Effective);
        let occupied: Vec<usize> = choice[..taboo_rows].iter().filter(|&&c| c > 0).copied().collect();
        let mut dedup = occupied.clone();
        dedup.sort_unstable();
        dedup.dedup();
        let disjoint = dedup.len() == occupied.len();
        ensure((value == 0.0) == disjoint, || format!("assignment {choice:?}: taboo {value}, disjoint {disjoint}"))?;
        ensure(value >= 0.0, || format!("negative taboo {value}"))?;
        total += 1;
        if choice.iter().all(|&c| c > 0) {
            one_per_step += 1;
        }
    }
    within(t0.elapsed(), Duration::from_secs(30))?;
    Ok(format!("{total} assignments ({one_per_step} with exactly one site per step)"))
}

fn ac6_decoder_equivalence() -> Check {
    let t0 = Instant::now();
    let mut recovered = 0;
    for n in [4, 6] {
        for cycle in enumerate_cycles(n, 0).unwrap() {
            let s = LayerSnapshots::one_hot(&cycle, n).unwrap();
            let d = decode(&s, n, 0, DecodeMode::Product).map_err(|e| e.to_string())?;
            ensure(d.path == cycle, || format!("decoded {:?} from trace {cycle:?}", d.path))?;
            recovered += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for set in 0..100 {
        let n = if set % 2 == 0 { 4 } else { 6 };
        let occ: Vec<Vec<f64>> = (0..=n).map(|_| (0..n).map(|_| rng.random::<f64>()).collect()).collect();
        let c = rng.random_range(0.01..1.0);
        let scaled: Vec<Vec<f64>> = occ.iter().map(|r| r.iter().map(|q| c * q).collect()).collect();
        let a = LayerSnapshots::from_occupancy(occ).unwrap();
        let b = LayerSnapshots::from_occupancy(scaled).unwrap();
        for mode in [DecodeMode::Sum, DecodeMode::Product] {
            let pa = decode(&a, n, 0, mode).unwrap().path;
            let pb = decode(&b, n, 0, mode).unwrap().path;
            ensure(pa == pb, || format!("set {set} {mode:?}: {pa:?} vs {pb:?} after scaling by {c}"))?;
        }
    }
    within(t0.elapsed(), Duration::from_secs(30))?;
    Ok(format!("{recovered} traced tours recovered, 100 scaled sets stable"))
}

fn ac7_square_family(out: &Path) -> Check {
    let t0 = Instant::now();
    let cfg = config(
        "[graph]\nkind = \"square\"\nt = [0.0, 0.1, 0.2, 0.3, 0.4]\n\
         [model]\nlayers = 4\ndecode = \"both\"\n\
         [loss]\ncost = \"weighted\"\ntaboo = \"effective\"\ntaboo_sign = \"plus\"\nlambda = 1.0\n\
         [optimizer]\nbudget = 500\nseeds = [0, 1, 2, 3, 4]\n",
        out,
    );
    let outcome = experiment::run(&cfg).map_err(|e| e.to_string())?;
    ensure(outcome.results.iter().all(|r| r.gap() >= -1e-9), || "negative gap".into())?;
    let best_for = |mode: DecodeMode| {
        cfg.seeds
            .iter()
            .map(|&seed| {
                let hits = outcome
                    .results
                    .iter()
                    .filter(|r| r.seed == seed && r.mode == mode && r.is_optimal())
                    .count();
                (hits, seed)
            })
            .max()
            .unwrap()
    };
    let (sum_hits, sum_seed) = best_for(DecodeMode::Sum);
    let (prod_hits, prod_seed) = best_for(DecodeMode::Product);
    ensure(sum_hits >= 3, || format!("sum decoding: best seed optimal on {sum_hits}/5 samples"))?;
    ensure(prod_hits >= 2, || format!("product decoding: best seed optimal on {prod_hits}/5 samples"))?;
    within(t0.elapsed(), Duration::from_secs(300))?;
    Ok(format!(
        "sum: seed {sum_seed} optimal on {sum_hits}/5; product: seed {prod_seed} optimal on {prod_hits}/5"
    ))
}

fn ac8_vqe_baseline(out: &Path) -> Check {
    let g = square_graph(0.0);
    let model = VqeModel::with_default_penalties(&g, 1).map_err(|e| e.to_string())?;
    ensure(model.num_qubits() == 16, || format!("{} qubits", model.num_qubits()))?;
    let problem = VqeProblem::new(model.clone(), &g).map_err(|e| e.to_string())?;
    let state = StateVector::basis(16, encode_tour(&model, &[0, 1, 2, 3, 0])).unwrap();
    let e = problem.expectation(&state).unwrap();
    ensure((e - 4.0 * FRAC_1_SQRT_2).abs() < 1e-12, || format!("one-hot tour energy {e}"))?;

    let params = vqkan::optimizer::random_init(model.num_parameters(), 0, 0.1).unwrap();
    let t0 = Instant::now();
    let energy = vqe_energy(&model, &g, &params).map_err(|e| e.to_string())?;
    let eval_time = t0.elapsed();
    ensure(energy.is_finite(), || format!("energy {energy}"))?;
    within(eval_time, Duration::from_secs(1))?;

    let cfg = config(
        "[graph]\nkind = \"square\"\n[optimizer]\nbudget = 200\n[vqe]\nbudget = 40\n",
        out,
    );
    let rows = experiment::compare(&cfg).map_err(|e| e.to_string())?;
    let csv = std::fs::read_to_string(out.join("compare.csv")).map_err(|e| e.to_string())?;
    let mut lines = csv.lines();
    ensure(lines.next() == Some(COMPARE_HEADER), || "compare.csv header".into())?;
    let body: Vec<&str> = lines.collect();
    ensure(body.len() == 6 && rows.len() == 6, || format!("{} compare rows", body.len()))?;
    for line in &body {
        let cols: Vec<&str> = line.split(',').collect();
        ensure(cols.len() == 7, || format!("row {line:?}"))?;
        for flag in [cols[2], cols[4], cols[6]] {
            ensure(flag == "true" || flag == "false", || format!("validity flag {flag:?}"))?;
        }
    }
    let vqe_valid = rows.iter().filter(|r| r.vqe.valid).count();
    Ok(format!(
        "tour energy {e:.12}, 16-qubit eval {eval_time:?}, compare.csv 6 rows ({vqe_valid} valid VQE tours)"
    ))
}

fn ac9_determinism(out: &Path) -> Check {
    let text = "[graph]\nkind = \"random\"\nseed = 5\nsites = 4\nsteps = 3\n\
                [model]\ndecode = \"both\"\n[optimizer]\nbudget = 300\nseeds = [0, 1, 2]\n";
    let (a, b) = (out.join("a"), out.join("b"));
    experiment::run(&config(text, &a)).map_err(|e| e.to_string())?;
    experiment::run(&config(text, &b)).map_err(|e| e.to_string())?;
    for name in ["trials.csv", "results.csv"] {
        let x = std::fs::read(a.join(name)).map_err(|e| e.to_string())?;
        let y = std::fs::read(b.join(name)).map_err(|e| e.to_string())?;
        ensure(x == y, || format!("{name} differs between runs"))?;
    }
    Ok("trials.csv and results.csv byte-identical".into())
}

fn ac10_monotonicity(dirs: &[&Path]) -> Check {
    let mut files = 0;
    let mut rows = 0;
    for dir in dirs {
        let text = std::fs::read_to_string(dir.join("trials.csv")).map_err(|e| format!("{}: {e}", dir.display()))?;
        let mut last: Option<(u64, f64)> = None;
        for line in text.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            let seed: u64 = cols[0].parse().map_err(|_| format!("bad seed in {line:?}"))?;
            let best: f64 = cols[3].parse().map_err(|_| format!("bad best_so_far in {line:?}"))?;
            if let Some((s, prev)) = last {
                if s == seed {
                    ensure(best <= prev, || format!("seed {seed}: best_so_far rose {prev} -> {best}"))?;
                }
            }
            last = Some((seed, best));
            rows += 1;
        }
        files += 1;
    }
    Ok(format!("{files} trials files, {rows} rows non-increasing per seed"))
}

fn main() {
    let tmp = tempfile::tempdir().expect("temp dir");
    let root = tmp.path();
    let (square_dir, vqe_dir, det_dir) = (root.join("square"), root.join("compare"), root.join("determinism"));

    let criteria: Vec<Criterion> = vec![
        ("AC1 gate algebra", Box::new(ac1_gate_algebra)),
        ("AC2 excitation conservation", Box::new(ac2_conservation)),
        ("AC3 oracle ground truth", Box::new(ac3_oracle_ground_truth)),
        ("AC4 loss-oracle consistency", Box::new(ac4_loss_oracle_consistency)),
        ("AC5 taboo property", Box::new(ac5_taboo_property)),
        ("AC6 decoder oracle equivalence", Box::new(ac6_decoder_equivalence)),
        ("AC7 end-to-end square family", Box::new(|| ac7_square_family(&square_dir))),
        ("AC8 VQE baseline", Box::new(|| ac8_vqe_baseline(&vqe_dir))),
        ("AC9 determinism", Box::new(|| ac9_determinism(&det_dir))),
        (
            "AC10 monotonicity",
            Box::new(|| ac10_monotonicity(&[&square_dir, &det_dir.join("a"), &det_dir.join("b")])),
        ),
    ];

    let mut failed = 0;
    for (name, check) in &criteria {
        let t0 = Instant::now();
        match check() {
            Ok(detail) => println!("[PASS] {name}: {detail} ({:.2?})", t0.elapsed()),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why} ({:.2?})", t0.elapsed());
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

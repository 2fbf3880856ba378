//! Acceptance suite. Prints one PASS/FAIL line per criterion, then fails if
//! any criterion failed.

mod common;

use std::io::Cursor;
use std::time::Instant;

use common::{max_residual, oracle_objective, random_model, two_species_config};
use microlab_core::arena::{diffuse, run_simulation, SubstanceField};
use microlab_core::bench::{
    bench_import_and_frames, fps_from_durations, generate_dataset, BenchOptions, TABLE_SIZES,
    TARGET_FPS,
};
use microlab_core::dataset::{
    export_population, export_substance, import_pair, parse_population, FluxMode, RandomFluxes,
    FLUX_RANGE,
};
use microlab_core::metabolic::{
    monod_bound, solve_fba, BoundOverrides, SolveStatus, UptakeKinetics,
};
use microlab_core::viz::contrast_ratio;
use microlab_core::Grid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fba_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut optimal, mut infeasible) = (0, 0);
    for k in 0..200 {
        let model = random_model(&mut rng);
        let sol =
            solve_fba(&model, &BoundOverrides::new()).map_err(|e| format!("model {k}: {e}"))?;
        match (oracle_objective(&model), sol.status) {
            (Some(best), SolveStatus::Optimal) => {
                if (best - sol.objective).abs() > 1e-6 {
                    return Err(format!(
                        "model {k}: oracle {best} vs solver {}",
                        sol.objective
                    ));
                }
                optimal += 1;
            }
            (None, SolveStatus::Infeasible) => infeasible += 1,
            (o, s) => return Err(format!("model {k}: oracle {o:?} vs status {s:?}")),
        }
    }
    let secs = start.elapsed().as_secs_f64();
    if secs >= 10.0 {
        return Err(format!("took {secs:.2} s"));
    }
    Ok(format!(
        "{optimal} optimal, {infeasible} infeasible, all within 1e-6, {secs:.2} s"
    ))
}

fn steady_state_residual() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let model = random_model(&mut rng);
        let sol = solve_fba(&model, &BoundOverrides::new()).map_err(|e| e.to_string())?;
        if sol.is_optimal() {
            worst = worst.max(max_residual(&model, &sol.fluxes));
        }
    }
    if worst > 1e-6 {
        return Err(format!("max |S v| = {worst:e}"));
    }
    Ok(format!("max |S v| = {worst:e}"))
}

fn diffusion_conservation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let data: Vec<f64> = (0..400).map(|_| rng.gen_range(0.0..10.0)).collect();
    let mut field = SubstanceField {
        name: "S".into(),
        concentrations: Grid::from_rows(20, 20, data).unwrap(),
        diffusivity: 0.25,
    };
    let m0 = field.total();
    let (mut lo, mut hi) = field.concentrations.extremes().unwrap();
    let mut drift: f64 = 0.0;
    for step in 0..1000 {
        field = diffuse(&field, 1.0).map_err(|e| e.to_string())?;
        let (l, h) = field.concentrations.extremes().unwrap();
        if l < lo || h > hi {
            return Err(format!("step {step}: range [{l}, {h}] left [{lo}, {hi}]"));
        }
        (lo, hi) = (l, h);
        drift = drift.max((field.total() - m0).abs() / m0);
    }
    if drift > 1e-9 {
        return Err(format!("relative drift {drift:e}"));
    }
    Ok(format!("relative drift {drift:e}, range held every step"))
}

fn monod_identities() -> Outcome {
    for (vmax, km) in [(10.0, 0.5), (3.7, 2.2), (1e-3, 1e3), (0.1, 0.3)] {
        let kin = UptakeKinetics::new(vmax, km).unwrap();
        let zero = monod_bound(&kin, 0.0).unwrap();
        let half = monod_bound(&kin, km).unwrap();
        if zero != 0.0 || half != vmax / 2.0 {
            return Err(format!("vmax {vmax}, km {km}: {zero}, {half}"));
        }
        let kin32 = UptakeKinetics::new(vmax as f32, km as f32).unwrap();
        if monod_bound(&kin32, km as f32).unwrap() != vmax as f32 / 2.0 {
            return Err(format!("f32 vmax {vmax}, km {km}"));
        }
    }
    Ok("c = 0 -> 0 and c = km -> vmax/2 exactly".into())
}

fn export_round_trip() -> Outcome {
    let mut rows = 0;
    for seed in 0..50u64 {
        let cfg = two_species_config(seed, 7, 5, 3);
        let trace = run_simulation(&cfg, 3).map_err(|e| format!("seed {seed}: {e}"))?;
        let pop = export_population(&trace, &trace.substances, FluxMode::Computed);
        let sub = export_substance(&trace, &trace.substances);
        let out = import_pair(
            Cursor::new(pop),
            Cursor::new(sub),
            "population_dataset.csv",
            "substance_dataset.csv",
            |_| {},
        );
        let pair = out
            .pair
            .ok_or_else(|| format!("seed {seed}: {:?}", out.report.errors))?;
        let mut records = pair.population.iter();
        for snap in trace.snapshots.iter().skip(1) {
            for a in &snap.agents {
                let r = records.next().ok_or("missing record")?;
                let same = r.time == snap.step
                    && (r.x, r.y, r.genotype, r.phenotype) == (a.x, a.y, a.genotype, a.phenotype)
                    && r.biomass.to_bits() == a.biomass.to_bits()
                    && a.fluxes
                        .iter()
                        .zip(&r.fluxes)
                        .all(|(p, q)| p.to_bits() == q.to_bits());
                if !same {
                    return Err(format!("seed {seed}: record {r:?} vs agent {a:?}"));
                }
                rows += 1;
            }
            for (i, name) in trace.substances.iter().enumerate() {
                for y in 1..=trace.height as u32 {
                    for x in 1..=trace.width as u32 {
                        let want = snap.fields[i].at(x, y);
                        let got = pair
                            .concentration(name, snap.step, x, y)
                            .ok_or("missing cell")?;
                        if got.to_bits() != want.to_bits() {
                            return Err(format!(
                                "seed {seed}: {name} ({x},{y}) t={}: {got} vs {want}",
                                snap.step
                            ));
                        }
                    }
                }
            }
        }
        if records.next().is_some() {
            return Err(format!("seed {seed}: extra records"));
        }
    }
    Ok(format!(
        "50 runs, {rows} population rows reconstructed bit-exactly"
    ))
}

const ROW_A: &str = "Population,1,1,1,10.5,1,1,Escherichia_coli_K12,0,0,0,0,0,0";
const ROW_B: &str = "Population,2,2,1,11.5,2,1,Blautia_producta_DSM2950,0,0,0,0,0,0";
const SUB_OK: &str = "Substance,Glucose,1,1,1,2\nSubstance,Glucose,2,1,3,4\n";

fn import_errors(pop: &str, sub: &str) -> Vec<String> {
    import_pair(
        pop.as_bytes(),
        sub.as_bytes(),
        "population_dataset.csv",
        "substance_dataset.csv",
        |_| {},
    )
    .report
    .errors
}

fn error_messages() -> Outcome {
    let cases: [(&str, String, String, &str); 5] = [
        (
            "format",
            format!("{ROW_A}\nPopulation,2,2,1,abc,2,1,Blautia_producta_DSM2950,0,0,0,0,0,0\n"),
            SUB_OK.to_string(),
            "Format of population_dataset.csv is invalid. Please check line 2, column 5. Invalid entry: abc. Should be of type: nonnegative decimal!",
        ),
        (
            "columns",
            format!("{ROW_A},0\n"),
            SUB_OK.to_string(),
            "Population dataset has 15 instead of 14 columns!",
        ),
        (
            "times",
            format!("{ROW_A}\n{ROW_B}\n"),
            "Substance,Glucose,1,1,1,2\nSubstance,Glucose,3,1,3,4\n".to_string(),
            "The simulation times [1, 2] and [1, 3] of your datasets don't match!",
        ),
        (
            "dimensions",
            format!("{ROW_A}\n{ROW_B}\n"),
            "Substance,Glucose,1,1,1,2\nSubstance,Glucose,1,2,1,2,3\nSubstance,Glucose,2,1,3,4\nSubstance,Glucose,2,2,1,2\n"
                .to_string(),
            "The simulation dimensions of x [2, 3] or y [2] don't match!",
        ),
        (
            "genotype",
            format!("{ROW_A}\n{ROW_B}\nPopulation,2,1,1,9,1,1,Clostridium_ramosum_VPI0427,0,0,0,0,0,0\n"),
            SUB_OK.to_string(),
            "Genotype does not match a name in line 3 of population dataset!",
        ),
    ];
    for (label, pop, sub, want) in &cases {
        let got = import_errors(pop, sub);
        if got.first().map(String::as_str) != Some(*want) {
            return Err(format!("{label}: got {got:?}"));
        }
    }
    Ok("all five messages byte-exact".into())
}

fn substance_indexing() -> Outcome {
    let mut sub = String::new();
    for t in 1..=2 {
        for row in 1..=5 {
            let values: Vec<String> = (1..=4)
                .map(|x| match (t, x, row) {
                    (2, 1, 1) => "0.4132".to_string(),
                    (2, 4, 3) => "0.3920".to_string(),
                    _ => format!("0.{}{}{}", t, x, row),
                })
                .collect();
            sub.push_str(&format!(
                "Substance,Ammonium,{t},{row},{}\n",
                values.join(",")
            ));
        }
    }
    let pop = "Population,1,1,1,5,1,1,Escherichia_coli_K12,0,0,0,0,0,0\nPopulation,2,4,5,5,1,1,Escherichia_coli_K12,0,0,0,0,0,0\n";
    let out = import_pair(pop.as_bytes(), sub.as_bytes(), "p", "s", |_| {});
    let pair = out.pair.ok_or_else(|| format!("{:?}", out.report.errors))?;
    let a = pair.concentration("Ammonium", 2, 1, 1);
    let b = pair.concentration("Ammonium", 2, 4, 3);
    if a != Some(0.4132) || b != Some(0.3920) || pair.dims != (4, 5) {
        return Err(format!("{a:?}, {b:?}, dims {:?}", pair.dims));
    }
    Ok("(1,1,t=2) = 0.4132 mM, (4,3,t=2) = 0.3920 mM".into())
}

fn contrast_fixtures() -> Outcome {
    let cases = [
        ("#000000", 21.0, 0.01),
        ("#626262", 6.1, 0.05),
        ("#2096F3", 3.13, 0.05),
        ("#2075B9", 4.88, 0.05),
    ];
    let mut got = Vec::new();
    for (bg, want, tol) in cases {
        let r = contrast_ratio("#FFFFFF", bg).map_err(|e| e.to_string())?;
        if (r - want).abs() > tol {
            return Err(format!("{bg}: {r} vs {want}"));
        }
        got.push(format!("{bg} {r:.3}"));
    }
    Ok(got.join(", "))
}

fn randomized_fluxes() -> Outcome {
    let a: Vec<f64> = RandomFluxes::new(99).take(100_000).collect();
    let b: Vec<f64> = RandomFluxes::new(99).take(100_000).collect();
    let c: Vec<f64> = RandomFluxes::new(100).take(100_000).collect();
    if a != b || a == c {
        return Err("not seed-deterministic".into());
    }
    let (lo, hi) = a
        .iter()
        .fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
    if lo < FLUX_RANGE.0 || hi > FLUX_RANGE.1 {
        return Err(format!("range [{lo}, {hi}]"));
    }
    let trace = run_simulation(&two_species_config(4, 5, 5, 2), 2).map_err(|e| e.to_string())?;
    let text = export_population(&trace, &trace.substances, FluxMode::Randomized(8));
    if text != export_population(&trace, &trace.substances, FluxMode::Randomized(8)) {
        return Err("export not deterministic".into());
    }
    let records = parse_population(&text, "p").map_err(|e| e.to_string())?;
    if !records
        .iter()
        .flat_map(|r| &r.fluxes[..3])
        .all(|v| (-50.0..=50.0).contains(v))
    {
        return Err("exported flux out of range".into());
    }
    Ok(format!("1e5 samples in [{lo:.4}, {hi:.4}]"))
}

fn bench_harness() -> Outcome {
    for spec in &TABLE_SIZES {
        let d = generate_dataset(spec, 1).map_err(|e| e.to_string())?;
        let records = parse_population(&d.population, "p").map_err(|e| e.to_string())?;
        let mut counts = std::collections::BTreeMap::new();
        for r in &records {
            *counts.entry(r.time).or_insert(0usize) += 1;
        }
        let n = counts.values().copied().max().unwrap_or(0);
        if records.len() != spec.rows || n != spec.agents {
            return Err(format!("{spec}: generated {} rows, n = {n}", records.len()));
        }
    }
    for (ms, want) in [(14.0f64, "71.43"), (13.0f64, "76.92")] {
        let durations = vec![ms / 1000.0; 600];
        let s = fps_from_durations(&durations).map_err(|e| e.to_string())?;
        let exact = 1000.0 / ms;
        if (s.fps - exact).abs() > 1e-12 * exact
            || (s.fps * s.mean - 1.0).abs() > 1e-12
            || format!("{:.2}", s.fps) != want
        {
            return Err(format!("{ms} ms -> {}", s.fps));
        }
    }
    let rec = &bench_import_and_frames(&TABLE_SIZES[..1], &BenchOptions::default())
        .map_err(|e| e.to_string())?[0];
    let detail = format!(
        "small set: t1 {:.3} s, t2 {:.3} s, {:.1} FPS",
        rec.t1, rec.t2, rec.fps
    );
    if rec.fps < TARGET_FPS || rec.t1 > 1.0 || !rec.suitable {
        return Err(detail);
    }
    Ok(format!(
        "scales exact; 14 ms -> 71.43, 13 ms -> 76.92; {detail}"
    ))
}

fn simulation_behavior() -> Outcome {
    let cfg = two_species_config(21, 10, 10, 8);
    let trace = run_simulation(&cfg, 8).map_err(|e| e.to_string())?;
    let again = run_simulation(&cfg, 8).map_err(|e| e.to_string())?;
    if trace.to_json() != again.to_json() {
        return Err("repeated runs differ".into());
    }
    let glucose: Vec<f64> = trace.snapshots.iter().map(|s| s.fields[0].sum()).collect();
    for w in glucose.windows(2) {
        if w[1] > w[0] * (1.0 + 1e-12) {
            return Err(format!("glucose rose {} -> {}", w[0], w[1]));
        }
    }
    let biomass: Vec<f64> = trace
        .snapshots
        .iter()
        .map(|s| {
            s.agents
                .iter()
                .filter(|a| a.genotype == 1)
                .map(|a| a.biomass)
                .sum()
        })
        .collect();
    let mut checked = 0;
    for (k, w) in biomass.windows(2).enumerate() {
        let exhausted = trace.snapshots[k].fields[0]
            .as_slice()
            .iter()
            .any(|&c| c <= 1e-9);
        if exhausted {
            break;
        }
        if w[1] < w[0] * (1.0 - 1e-12) {
            return Err(format!(
                "biomass fell {} -> {} in step {}",
                w[0],
                w[1],
                k + 1
            ));
        }
        checked += 1;
    }
    Ok(format!(
        "glucose {:.3} -> {:.3}; species 1 biomass nondecreasing over {checked} steps; runs bitwise equal",
        glucose[0], glucose[8]
    ))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 11] = [
        ("FBA oracle equivalence", fba_oracle_equivalence),
        ("steady-state residual", steady_state_residual),
        ("diffusion conservation", diffusion_conservation),
        ("Monod identities", monod_identities),
        ("export round-trip", export_round_trip),
        ("validation messages", error_messages),
        ("substance indexing", substance_indexing),
        ("contrast ratios", contrast_fixtures),
        ("randomized fluxes", randomized_fluxes),
        ("bench harness", bench_harness),
        ("simulation behavior", simulation_behavior),
    ];
    let mut failed = Vec::new();
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                println!("FAIL  {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}

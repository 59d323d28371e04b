use std::f64::consts::PI;
use std::path::PathBuf;

use boole_core::correlations::{
    classify, elliptope_boundary, elliptope_value, sample_elliptope, CorrelationTriple,
};
use boole_core::event_algebra::{bell_facet_kind, bell_scenario, EventSystem, FacetKind};
use boole_core::polytope::{affine_dimension, facet_enumeration_with_limits, HPolytope, VPolytope};
use boole_core::quantum::{
    commutator_norm, inferred_triple, saturate_point, spin_component, sum_observable, trine,
    Direction, Spin,
};
use boole_core::raffles::{
    coverage_fraction, lhv_region_exact_k2, lhv_region_sampled_with_limits, tetrahedron_volume,
};
use boole_core::{rational, Error, Limits, EXACT_TOL, FLOAT_TOL};
use clap::{Args, Subcommand};
use nalgebra::Vector3;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};
use crate::run::{num, Run};
use crate::Global;

#[derive(Args, Debug)]
pub struct BooleArgs {
    /// Event system JSON: `{"events": [...], "constraints": ["(iff E3 (and E1 E2))"]}`.
    pub events_file: PathBuf,
}

#[derive(Args, Debug)]
pub struct BellArgs {
    /// Number of parties (only 2 is supported).
    pub parties: usize,
    /// Measurement settings per party (2 or 3).
    pub settings: usize,
}

#[derive(Subcommand, Debug)]
pub enum ElliptopeCommand {
    /// Classify triples as inside, boundary or outside.
    Check {
        /// Triples written `a,b,c`.
        #[arg(allow_hyphen_values = true)]
        triples: Vec<String>,
        /// JSON array of triples, or CSV with three columns.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Seeded uniform points of the elliptope.
    Sample {
        #[arg(long, default_value_t = 1000)]
        count: usize,
    },
    /// Boundary point cloud on a parameter grid.
    Mesh {
        #[arg(long, default_value_t = 41)]
        grid: usize,
    },
}

#[derive(Args, Debug)]
pub struct RaffleArgs {
    /// Values per variable.
    #[arg(long)]
    pub k: usize,
    /// Restrict tickets to values summing to zero.
    #[arg(long)]
    pub zero_sum: bool,
    /// Random mixtures in the cloud.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Monte Carlo points for the coverage estimate.
    #[arg(long, default_value_t = 1_000_000)]
    pub mc: u64,
}

#[derive(Subcommand, Debug)]
pub enum QuantumCommand {
    /// Steer the singlet to a target triple.
    Saturate {
        #[arg(long, default_value = "1/2")]
        spin: String,
        /// Target triple `a,b,c`.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Inferred triples over a grid of measurement directions.
    Sweep {
        #[arg(long, default_value = "1/2")]
        spin: String,
        /// Grid points per angle.
        #[arg(long, default_value_t = 7)]
        steps: usize,
    },
    /// Spectrum of the sum of three spin components.
    Sum {
        #[arg(long, default_value = "1")]
        spin: String,
        /// JSON `[[x,y,z],[x,y,z],[x,y,z]]`; defaults to three coplanar directions at 120 degrees.
        #[arg(long)]
        directions: Option<String>,
        /// Reject directions that are not unit vectors instead of normalizing.
        #[arg(long)]
        strict: bool,
    },
}

fn bits_csv(sys: &EventSystem) -> (Vec<Vec<i64>>, Vec<Vec<String>>) {
    let rows: Vec<Vec<i64>> = sys
        .enumerate_extremal_vectors()
        .iter()
        .map(|v| v.bits().iter().map(|&b| b as i64).collect())
        .collect();
    let text = rows
        .iter()
        .map(|r| r.iter().map(i64::to_string).collect())
        .collect();
    (rows, text)
}

fn rendered(h: &HPolytope, labels: &[String]) -> Vec<String> {
    h.equalities()
        .iter()
        .map(|e| e.render(labels))
        .chain(h.inequalities().iter().map(|f| f.render(labels)))
        .collect()
}

pub fn boole(g: &Global, limits: &Limits, a: BooleArgs) -> CliResult<()> {
    let mut run = Run::new(&g.out)?;
    let src = run.read_input(&a.events_file)?;
    let sys = EventSystem::from_json(&src, limits)?;
    let labels = sys.events().to_vec();
    let (rows, text) = bits_csv(&sys);
    let header: Vec<&str> = labels.iter().map(String::as_str).collect();
    run.write_csv("rows.csv", &header, text)?;

    let mut warning = Value::Null;
    let mut facets = 0;
    if rows.is_empty() {
        let msg = "the constraints are unsatisfiable: no extremal vectors, so no polytope";
        eprintln!("warning: {msg}");
        warning = json!(msg);
        run.write_json("facets.json", &json!({ "labels": labels, "polytope": Value::Null, "rendered": [] }))?;
        run.write_text("facets.txt", "")?;
    } else {
        let v = VPolytope::from_int_rows(&rows)?;
        let h = facet_enumeration_with_limits(&v, limits)?;
        let lines = rendered(&h, &labels);
        facets = h.inequalities().len();
        run.write_json(
            "facets.json",
            &json!({
                "labels": labels,
                "affine_dimension": affine_dimension(&v),
                "polytope": h.to_json(),
                "rendered": lines,
            }),
        )?;
        run.write_text("facets.txt", &lines.iter().map(|l| format!("{l}\n")).collect::<String>())?;
        for l in &lines {
            println!("{l}");
        }
    }
    let report = json!({
        "events": labels.len(),
        "rows": rows.len(),
        "facets": facets,
        "warning": warning,
    });
    run.write_json("report.json", &report)?;
    println!("{} rows, {} facets", rows.len(), facets);
    run.finish(
        "boole",
        json!({ "events_file": a.events_file.display().to_string() }),
        g.seed,
        g.tol,
        limits,
    )
}

pub fn bell(g: &Global, limits: &Limits, a: BellArgs) -> CliResult<()> {
    let sys = bell_scenario(a.parties, a.settings)?;
    let mut run = Run::new(&g.out)?;
    let labels = sys.events().to_vec();
    let (rows, text) = bits_csv(&sys);
    // Without explicit limits the scenario's own size is admitted.
    let limits = if g.limits.is_some() {
        *limits
    } else {
        Limits {
            max_vertices: limits.max_vertices.max(rows.len()),
            max_dim: limits.max_dim.max(labels.len()),
            max_events: limits.max_events.max(labels.len()),
            ..*limits
        }
    };
    let header: Vec<&str> = labels.iter().map(String::as_str).collect();
    run.write_csv("rows.csv", &header, text)?;
    let v = VPolytope::from_int_rows(&rows)?;
    let h = facet_enumeration_with_limits(&v, &limits)?;

    let kind_name = |k: FacetKind| match k {
        FacetKind::Trivial => "trivial",
        FacetKind::ClauserHorne => "clauser_horne",
        FacetKind::OtherBell => "other_bell",
    };
    let mut counts = [0usize; 3];
    let mut records = Vec::new();
    let mut csv_rows = Vec::new();
    for f in h.inequalities() {
        let kind = bell_facet_kind(a.settings, f);
        counts[kind as usize] += 1;
        let line = f.render(&labels);
        records.push(json!({
            "kind": kind_name(kind),
            "rendered": line,
            "coefficients": f.coefficients().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "constant": f.constant().to_string(),
        }));
        csv_rows.push(vec![kind_name(kind).to_string(), line]);
    }
    run.write_json("facets.json", &json!({ "labels": labels, "facets": records, "polytope": h.to_json() }))?;
    run.write_csv("facets.csv", &["kind", "inequality"], csv_rows)?;
    let report = json!({
        "parties": a.parties,
        "settings": a.settings,
        "events": labels.len(),
        "vertices": rows.len(),
        "affine_dimension": affine_dimension(&v),
        "facets": h.inequalities().len(),
        "kinds": { "trivial": counts[0], "clauser_horne": counts[1], "other_bell": counts[2] },
    });
    run.write_json("report.json", &report)?;
    println!(
        "{} vertices, {} facets: {} trivial, {} Clauser-Horne, {} other Bell-type",
        rows.len(),
        h.inequalities().len(),
        counts[0],
        counts[1],
        counts[2]
    );
    run.finish(
        "bell",
        json!({ "parties": a.parties, "settings": a.settings }),
        g.seed,
        g.tol,
        &limits,
    )
}

fn parse_triple(s: &str) -> CliResult<CorrelationTriple> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    let parts: Vec<&str> = t.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(CliError::Input(format!("expected a triple a,b,c, got {s:?}")));
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p
            .parse()
            .map_err(|_| CliError::Input(format!("not a number: {p:?} in {s:?}")))?;
    }
    Ok(CorrelationTriple::new(v[0], v[1], v[2])?)
}

fn read_triples(src: &str, json_input: bool) -> CliResult<Vec<CorrelationTriple>> {
    if json_input {
        let arrays: Vec<[f64; 3]> = serde_json::from_str(src)
            .map_err(|e| CliError::Input(format!("triples JSON: {e}")))?;
        return arrays
            .iter()
            .map(|v| Ok(CorrelationTriple::new(v[0], v[1], v[2])?))
            .collect();
    }
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(src.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Input(format!("triples CSV: {e}")))?;
        let joined: Vec<&str> = rec.iter().collect();
        // A non-numeric first row is a header.
        if i == 0 && joined.iter().any(|f| f.parse::<f64>().is_err()) {
            continue;
        }
        out.push(parse_triple(&joined.join(","))?);
    }
    Ok(out)
}

fn triple_row(t: &CorrelationTriple) -> Vec<String> {
    t.as_array().iter().map(|&x| num(x)).collect()
}

pub fn elliptope(g: &Global, limits: &Limits, c: ElliptopeCommand) -> CliResult<()> {
    let mut run = Run::new(&g.out)?;
    let config = match c {
        ElliptopeCommand::Check { triples, input } => {
            let tol = g.tol.unwrap_or(EXACT_TOL);
            let mut all: Vec<CorrelationTriple> = triples.iter().map(|s| parse_triple(s)).collect::<CliResult<_>>()?;
            if let Some(path) = &input {
                let src = run.read_input(path)?;
                let json_input = path.extension().is_some_and(|e| e == "json");
                all.extend(read_triples(&src, json_input)?);
            }
            if all.is_empty() {
                return Err(CliError::Input("no triples given".into()));
            }
            let mut records = Vec::new();
            let mut rows = Vec::new();
            for t in &all {
                let value = elliptope_value(t);
                let placement = classify(t, tol);
                let name = serde_json::to_value(placement)?;
                println!("{:?} {} value {}", t.as_array(), name.as_str().unwrap_or(""), num(value));
                let mut row = triple_row(t);
                row.extend([num(value), name.as_str().unwrap_or("").to_string()]);
                rows.push(row);
                records.push(json!({ "triple": t, "value": value, "placement": name }));
            }
            run.write_json("check.json", &records)?;
            run.write_csv("check.csv", &["rho_xy", "rho_xz", "rho_yz", "value", "placement"], rows)?;
            json!({
                "mode": "check",
                "triples": triples,
                "input": input.map(|p| p.display().to_string()),
            })
        }
        ElliptopeCommand::Sample { count } => {
            let pts = sample_elliptope(count, g.seed);
            run.write_csv("sample.csv", &["rho_xy", "rho_xz", "rho_yz"], pts.iter().map(triple_row))?;
            run.write_json("sample.json", &pts)?;
            println!("{} points, seed {}", pts.len(), g.seed);
            json!({ "mode": "sample", "count": count })
        }
        ElliptopeCommand::Mesh { grid } => {
            if grid < 2 {
                return Err(CliError::Input("mesh grid needs at least 2 points per axis".into()));
            }
            let pts = elliptope_boundary(grid);
            run.write_csv("mesh.csv", &["rho_xy", "rho_xz", "rho_yz"], pts.iter().map(triple_row))?;
            println!("{} boundary points", pts.len());
            json!({ "mode": "mesh", "grid": grid })
        }
    };
    run.finish("elliptope", config, g.seed, g.tol, limits)
}

pub fn raffle(g: &Global, limits: &Limits, a: RaffleArgs) -> CliResult<()> {
    let region = lhv_region_sampled_with_limits(a.k, a.zero_sum, a.samples, g.seed, limits)?;
    let mut run = Run::new(&g.out)?;
    run.write_csv("cloud.csv", &["rho_xy", "rho_xz", "rho_yz"], region.cloud.iter().map(triple_row))?;

    let hull = match region.cloud_hull() {
        Some(h) => {
            let verts = h.vertex_indices();
            let position = |i: usize| verts.binary_search(&i).expect("face vertex");
            json!({
                "vertices": verts.iter().map(|&i| h.points()[i]).collect::<Vec<_>>(),
                "faces": h.faces().iter().map(|f| f.map(position)).collect::<Vec<_>>(),
                "volume": h.volume(),
            })
        }
        None => json!({ "vertices": [], "faces": [], "volume": 0.0 }),
    };
    run.write_json("hull.json", &hull)?;

    let coverage = coverage_fraction(&region, a.mc, g.seed)?;
    let mut report = json!({
        "k": a.k,
        "zero_sum": a.zero_sum,
        "samples": a.samples,
        "coverage": coverage,
    });
    println!(
        "k={} coverage {:.5} +- {:.5} ({} of {} elliptope points)",
        a.k, coverage.fraction, coverage.half_width, coverage.region_points, coverage.elliptope_points
    );
    if a.k == 2 && !a.zero_sum {
        let exact = lhv_region_exact_k2()?;
        let v = exact.vertices.as_ref().expect("exact region has vertices");
        let h = exact.facets.as_ref().expect("exact region has facets");
        let labels: Vec<String> = ["rho_xy", "rho_xz", "rho_yz"].iter().map(|s| s.to_string()).collect();
        let volume = tetrahedron_volume(v.vertices())?;
        run.write_json(
            "tetrahedron.json",
            &json!({
                "vertices": v.to_json(),
                "facets": h.to_json(),
                "rendered": rendered(h, &labels),
                "volume": rational::format(&volume),
            }),
        )?;
        let exact_cov = coverage_fraction(&exact, a.mc, g.seed)?;
        report["exact_coverage"] = serde_json::to_value(exact_cov)?;
        for p in v.vertices() {
            println!("tetrahedron vertex {:?}", p.to_f64());
        }
    }
    run.write_json("coverage.json", &report)?;
    run.finish(
        "raffle",
        json!({ "k": a.k, "zero_sum": a.zero_sum, "samples": a.samples, "mc": a.mc }),
        g.seed,
        g.tol,
        limits,
    )
}

fn parse_spin(s: &str, limits: &Limits) -> CliResult<Spin> {
    let open = Limits {
        max_twice_spin: u32::MAX,
        ..*limits
    };
    let spin = Spin::parse(s, &open).map_err(|e| CliError::Input(e.to_string()))?;
    Spin::from_twice_with_limits(spin.twice(), limits).map_err(|e| CliError::Limit(e.to_string()))
}

fn record(spin: Spin, d: &[Direction; 3]) -> (Value, CorrelationTriple) {
    let t = inferred_triple(spin, &d[0], &d[1], &d[2]);
    (
        json!({ "directions": d, "triple": t, "elliptope_value": elliptope_value(&t) }),
        t,
    )
}

pub fn quantum(g: &Global, limits: &Limits, c: QuantumCommand) -> CliResult<()> {
    let config = match &c {
        QuantumCommand::Saturate { spin, target } => json!({ "mode": "saturate", "spin": spin, "target": target }),
        QuantumCommand::Sweep { spin, steps } => json!({ "mode": "sweep", "spin": spin, "steps": steps }),
        QuantumCommand::Sum { spin, directions, strict } => {
            json!({ "mode": "sum", "spin": spin, "directions": directions, "strict": strict })
        }
    };
    let mut run = Run::new(&g.out)?;
    match c {
        QuantumCommand::Saturate { spin, target } => {
            let spin = parse_spin(&spin, limits)?;
            let t = parse_triple(&target)?;
            let sat = saturate_point(spin, &t)?;
            let tol = g.tol.unwrap_or(FLOAT_TOL);
            let (mut rec, _) = record(spin, &sat.directions);
            rec["target"] = serde_json::to_value(t)?;
            rec["achieved"] = serde_json::to_value(sat.achieved)?;
            rec["max_deviation"] = json!(sat.max_deviation);
            rec["within_tolerance"] = json!(sat.max_deviation <= tol);
            rec["spin"] = json!(spin.value());
            run.write_json("saturate.json", &rec)?;
            println!("achieved {:?}, max deviation {:e}", sat.achieved.as_array(), sat.max_deviation);
        }
        QuantumCommand::Sweep { spin, steps } => {
            let spin = parse_spin(&spin, limits)?;
            if steps < 2 {
                return Err(CliError::Input("sweep needs at least 2 steps".into()));
            }
            // e1 = z; e2 in the x-z plane at polar angle t2; e3 at (t3, p3).
            let angle = |i: usize, span: f64| span * i as f64 / (steps - 1) as f64;
            let polar = |t: f64, p: f64| {
                Direction::new(Vector3::new(t.sin() * p.cos(), t.sin() * p.sin(), t.cos()))
            };
            let mut records = Vec::new();
            let mut rows = Vec::new();
            for i in 0..steps {
                for j in 0..steps {
                    for k in 0..steps {
                        let (t2, t3, p3) = (angle(i, PI), angle(j, PI), angle(k, 2.0 * PI));
                        let d = [Direction::z(), polar(t2, 0.0)?, polar(t3, p3)?];
                        let (rec, t) = record(spin, &d);
                        let mut row = vec![num(t2), num(t3), num(p3)];
                        row.extend(triple_row(&t));
                        row.push(num(elliptope_value(&t)));
                        rows.push(row);
                        records.push(rec);
                    }
                }
            }
            run.write_csv(
                "sweep.csv",
                &["theta2", "theta3", "phi3", "rho_xy", "rho_xz", "rho_yz", "value"],
                rows,
            )?;
            run.write_json("sweep.json", &records)?;
            println!("{} direction triples", records.len());
        }
        QuantumCommand::Sum { spin, directions, strict } => {
            let spin = parse_spin(&spin, limits)?;
            let d: [Direction; 3] = match directions {
                None => trine(),
                Some(text) => {
                    let raw: [[f64; 3]; 3] = serde_json::from_str(&text)
                        .map_err(|e| CliError::Input(format!("directions JSON: {e}")))?;
                    let make = |v: [f64; 3]| -> Result<Direction, Error> {
                        let v = Vector3::new(v[0], v[1], v[2]);
                        if strict {
                            Direction::strict(v)
                        } else {
                            Direction::new(v)
                        }
                    };
                    [make(raw[0])?, make(raw[1])?, make(raw[2])?]
                }
            };
            let sum = sum_observable(spin, &d[0], &d[1], &d[2]);
            let ops = d.map(|e| spin_component(spin, &e));
            let comm = json!({
                "12": commutator_norm(&ops[0], &ops[1]),
                "13": commutator_norm(&ops[0], &ops[2]),
                "23": commutator_norm(&ops[1], &ops[2]),
            });
            let eig = sum.eigenvalues();
            let max_abs = sum.max_abs();
            let tol = g.tol.unwrap_or(EXACT_TOL);
            run.write_json(
                "sum.json",
                &json!({
                    "spin": spin.value(),
                    "directions": d,
                    "eigenvalues": eig,
                    "max_abs_entry": max_abs,
                    "zero_within_tolerance": max_abs <= tol,
                    "commutator_norms": comm,
                }),
            )?;
            println!("eigenvalues {eig:?}, max |entry| {max_abs:e}, commutator norms {comm}");
        }
    }
    run.finish("quantum", config, g.seed, g.tol, limits)
}

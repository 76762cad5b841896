//! Command-line front end: reads complexes, filtrations, point clouds, and
//! images; computes homology, persistence, Morse data, and edge-path groups;
//! prints deterministic text, JSON, or SVG.

use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use betti::complex::{
    parse_complex, parse_complex_with, parse_filtration, render_filtration, Filtration, SymbolTable,
};
use betti::morse::{parse_field_text, render_field_text};
use betti::persistence::{diagram_from_json, diagram_to_json, render_svg, render_text, Diagram};
use betti::pi1::{presentation_json, render_presentation_text};
use betti::{
    abelianize, bottleneck_distance, cech_filtration, cohomology_gf2, compute_persistence,
    cubical_lower_star, euler_poincare, greedy_gradient, homology_gf2, homology_z,
    mayer_vietoris_check, morse_complex, morse_inequalities, presentation, rips_filtration,
    simplify, AbelianInvariants, Cell, DiscreteVectorField, DistanceMatrix, GrayscaleImage,
    HomologySummary, PointCloud,
};

/// Scale conventions: `rips` uses edge *diameter* (a simplex enters at its
/// largest pairwise distance), `cech` uses enclosing-ball *radius* (an edge of
/// length d enters at d/2). All outputs are deterministic byte-for-byte.
#[derive(Parser)]
#[command(
    name = "betti",
    version,
    about = "Topological computations on complexes and data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Coeff {
    Z,
    Gf2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DiagramFormat {
    Text,
    Json,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Homology of a complex or filtration file (simplicial or cubical).
    Homology {
        /// Input file, or - for stdin.
        input: String,
        /// Coefficients: exact integers (Betti + torsion) or GF(2).
        #[arg(long, value_enum, default_value = "z")]
        coeff: Coeff,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// GF(2) cohomology basis in one dimension.
    Cohomology {
        input: String,
        /// Cochain dimension k for H^k.
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Euler characteristic from cell counts and from Betti numbers.
    Euler { input: String },
    /// Persistence diagram of a filtration file.
    Persistence {
        /// Filtration file, or - for stdin (the default, for piping).
        #[arg(default_value = "-")]
        input: String,
        #[arg(long, value_enum, default_value = "text")]
        format: DiagramFormat,
        /// Drop pairs that are born and die at the same value.
        #[arg(long)]
        hide_zero: bool,
    },
    /// Vietoris-Rips filtration of a point cloud or distance matrix (CSV).
    /// Scale is the simplex diameter: largest pairwise distance.
    Rips {
        input: String,
        /// Treat the input as a full square distance matrix.
        #[arg(long)]
        distances: bool,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value_t = f64::INFINITY)]
        max_scale: f64,
    },
    /// Cech filtration of a point cloud (CSV). Scale is the radius of the
    /// smallest enclosing ball: an edge of length d appears at d/2.
    Cech {
        input: String,
        #[arg(long, default_value_t = 2)]
        max_dim: usize,
        #[arg(long, default_value_t = f64::INFINITY)]
        max_radius: f64,
    },
    /// Alpha filtration of a planar point cloud (CSV) over its Delaunay
    /// triangulation.
    Alpha {
        input: String,
        /// Seed for the insertion-order shuffle; fixed default keeps runs
        /// reproducible.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Lower-star filtration of grayscale images (PGM); several files stack
    /// into one 3-D image.
    Cubical { inputs: Vec<String> },
    /// Discrete Morse data: a gradient field (greedy, or from --field), its
    /// critical cells, Morse homology, and the Morse inequalities.
    Morse {
        input: String,
        /// Field file of `face -> coface` lines; default is the greedy field.
        #[arg(long)]
        field: Option<String>,
        /// Print the field itself instead of the report.
        #[arg(long)]
        write_field: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Edge-path group presentation and its abelianization.
    Pi1 {
        input: String,
        /// Root vertex label for the spanning tree; default is the first label.
        #[arg(long)]
        root: Option<String>,
        /// Keep the raw presentation: no Tietze simplification.
        #[arg(long)]
        no_simplify: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Bottleneck distance between two diagram JSON files in one dimension.
    Bottleneck {
        diagram_a: String,
        diagram_b: String,
        #[arg(long, default_value_t = 0)]
        dim: usize,
    },
    /// Mayer-Vietoris rank check for a complex covered by two subcomplexes.
    MvCheck {
        parent: String,
        x: String,
        y: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}

fn read_text(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(buf)
    } else {
        fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn read_bytes(path: &str) -> Result<Vec<u8>, String> {
    if path == "-" {
        let mut buf = Vec::new();
        std::io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn load_filtration(path: &str) -> Result<(Filtration, SymbolTable), String> {
    parse_filtration(&read_text(path)?).map_err(|e| format!("{path}: {e}"))
}

/// Z^b plus cyclic factors, or 0; GF(2)^b when the field is fixed.
fn group_text(betti: usize, torsion: &[u64], gf2: bool) -> String {
    let mut parts = Vec::new();
    match (betti, gf2) {
        (0, _) => {}
        (1, false) => parts.push("Z".to_string()),
        (b, false) => parts.push(format!("Z^{b}")),
        (b, true) => parts.push(format!("GF(2)^{b}")),
    }
    for t in torsion {
        parts.push(format!("Z/{t}"));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

fn homology_text(summary: &HomologySummary, top: usize) -> String {
    let mut out = String::new();
    for k in 0..=top {
        out.push_str(&format!(
            "H_{k} = {}\n",
            group_text(summary.betti(k), summary.torsion(k), false)
        ));
    }
    out.push_str(&format!("euler = {}\n", summary.euler));
    out
}

fn abelian_text(inv: &AbelianInvariants) -> String {
    group_text(inv.free_rank, &inv.torsion, false)
}

fn run(command: Command) -> Result<String, String> {
    match command {
        Command::Homology {
            input,
            coeff,
            format,
        } => {
            let (filtration, _) = load_filtration(&input)?;
            let view = filtration.to_view();
            match coeff {
                Coeff::Z => {
                    let summary = homology_z(&view);
                    Ok(match format {
                        Format::Text => homology_text(&summary, view.top_dim()),
                        Format::Json => {
                            let json = serde_json::to_string(&summary.to_json_value())
                                .expect("homology serializes");
                            format!("{json}\n")
                        }
                    })
                }
                Coeff::Gf2 => {
                    let betti = homology_gf2(&view);
                    Ok(match format {
                        Format::Text => {
                            let mut out = String::new();
                            for (k, b) in betti.iter().enumerate() {
                                out.push_str(&format!("H_{k} = {}\n", group_text(*b, &[], true)));
                            }
                            out.push_str(&format!("euler = {}\n", view.euler_characteristic()));
                            out
                        }
                        Format::Json => format!(
                            "{}\n",
                            serde_json::json!({
                                "betti": betti,
                                "euler": view.euler_characteristic(),
                            })
                        ),
                    })
                }
            }
        }
        Command::Cohomology { input, dim, format } => {
            let (filtration, symbols) = load_filtration(&input)?;
            let view = filtration.to_view();
            let basis = cohomology_gf2(&view, dim);
            let cells = view.cells(dim);
            let support = |rep: &betti::BitVec| -> Vec<String> {
                rep.ones()
                    .into_iter()
                    .map(|i| cell_label(&cells[i], &symbols))
                    .collect()
            };
            match format {
                Format::Text => {
                    let mut out = format!("H^{dim} = {}\n", group_text(basis.betti, &[], true));
                    for rep in &basis.representatives {
                        out.push_str(&format!("cocycle: {}\n", support(rep).join(" | ")));
                    }
                    Ok(out)
                }
                Format::Json => Ok(format!(
                    "{}\n",
                    serde_json::json!({
                        "k": dim,
                        "betti": basis.betti,
                        "representatives": basis
                            .representatives
                            .iter()
                            .map(&support)
                            .collect::<Vec<_>>(),
                    })
                )),
            }
        }
        Command::Euler { input } => {
            let (filtration, _) = load_filtration(&input)?;
            let (from_cells, from_betti) = euler_poincare(&filtration.to_view());
            Ok(format!(
                "chi from cell counts = {from_cells}\nchi from betti numbers = {from_betti}\n"
            ))
        }
        Command::Persistence {
            input,
            format,
            hide_zero,
        } => {
            let (filtration, symbols) = load_filtration(&input)?;
            let mut diagram = compute_persistence(&filtration);
            if hide_zero && format != DiagramFormat::Text {
                diagram.pairs.retain(|p| p.persistence() > 0.0);
            }
            Ok(match format {
                DiagramFormat::Text => render_text(&diagram, &symbols, hide_zero),
                DiagramFormat::Json => format!(
                    "{}\n",
                    serde_json::to_string(&diagram_to_json(&diagram, &symbols))
                        .expect("diagram serializes")
                ),
                DiagramFormat::Svg => render_svg(&diagram),
            })
        }
        Command::Rips {
            input,
            distances,
            max_dim,
            max_scale,
        } => {
            let text = read_text(&input)?;
            let matrix = if distances {
                DistanceMatrix::from_csv(&text).map_err(|e| format!("{input}: {e}"))?
            } else {
                PointCloud::from_csv(&text, false)
                    .map_err(|e| format!("{input}: {e}"))?
                    .distance_matrix()
            };
            let filtration = rips_filtration(&matrix, max_dim, max_scale);
            Ok(render_filtration(
                &filtration,
                &SymbolTable::numeric(matrix.len()),
            ))
        }
        Command::Cech {
            input,
            max_dim,
            max_radius,
        } => {
            let cloud = PointCloud::from_csv(&read_text(&input)?, false)
                .map_err(|e| format!("{input}: {e}"))?;
            let filtration =
                cech_filtration(&cloud, max_dim, max_radius).map_err(|e| e.to_string())?;
            Ok(render_filtration(
                &filtration,
                &SymbolTable::numeric(cloud.len()),
            ))
        }
        Command::Alpha { input, seed } => {
            let cloud = PointCloud::from_csv(&read_text(&input)?, false)
                .map_err(|e| format!("{input}: {e}"))?;
            let filtration = alpha(&cloud, seed)?;
            Ok(render_filtration(
                &filtration,
                &SymbolTable::numeric(cloud.len()),
            ))
        }
        Command::Cubical { inputs } => {
            if inputs.is_empty() {
                return Err("cubical needs at least one image file".to_string());
            }
            let mut slices = Vec::new();
            for path in &inputs {
                slices.push(
                    GrayscaleImage::from_pgm(&read_bytes(path)?)
                        .map_err(|e| format!("{path}: {e}"))?,
                );
            }
            let image = if slices.len() == 1 {
                slices.pop().expect("one slice")
            } else {
                GrayscaleImage::stack(&slices).map_err(|e| e.to_string())?
            };
            Ok(render_filtration(
                &cubical_lower_star(&image),
                &SymbolTable::numeric(0),
            ))
        }
        Command::Morse {
            input,
            field,
            write_field,
            format,
        } => {
            let (filtration, symbols) = load_filtration(&input)?;
            let view = filtration.to_view();
            let gradient = match field {
                Some(path) => {
                    let pairs = parse_field_text(&read_text(&path)?, &symbols)
                        .map_err(|e| format!("{path}: {e}"))?;
                    DiscreteVectorField::from_pairs(
                        &view,
                        pairs
                            .into_iter()
                            .map(|(a, b)| (Cell::Simplex(a), Cell::Simplex(b))),
                    )
                    .map_err(|e| format!("{path}: {e}"))?
                }
                None => greedy_gradient(&view, None),
            };
            if write_field {
                return Ok(render_field_text(&gradient, &symbols));
            }
            let morse = morse_complex(&view, &gradient).map_err(|e| e.to_string())?;
            let report = morse_inequalities(&view, &gradient).map_err(|e| e.to_string())?;
            match format {
                Format::Text => {
                    let mut out = format!("pairs: {}\ncritical:\n", gradient.len());
                    for k in 0..=morse.top_dim() {
                        for cell in morse.critical(k) {
                            out.push_str(&cell_label(cell, &symbols));
                            out.push('\n');
                        }
                    }
                    out.push_str(&format!(
                        "critical counts: {:?}\nbetti gf2: {:?}\n",
                        report.critical_counts, report.betti_gf2
                    ));
                    out.push_str(&format!(
                        "morse homology: {:?}\ninequalities hold: {}\n",
                        morse.homology_gf2(),
                        report.all_hold()
                    ));
                    Ok(out)
                }
                Format::Json => {
                    let critical: Vec<Vec<String>> = (0..=morse.top_dim())
                        .map(|k| {
                            morse
                                .critical(k)
                                .iter()
                                .map(|c| cell_label(c, &symbols))
                                .collect()
                        })
                        .collect();
                    Ok(format!(
                        "{}\n",
                        serde_json::json!({
                            "pairs": gradient.len(),
                            "critical": critical,
                            "report": report,
                            "morse_homology": morse.homology_gf2(),
                        })
                    ))
                }
            }
        }
        Command::Pi1 {
            input,
            root,
            no_simplify,
            format,
        } => {
            let parsed = parse_complex(&read_text(&input)?).map_err(|e| format!("{input}: {e}"))?;
            let root_id = match root {
                Some(label) => parsed
                    .symbols
                    .id(&label)
                    .ok_or_else(|| format!("unknown root label {label:?}"))?,
                None => 0,
            };
            let mut p = presentation(&parsed.complex, root_id).map_err(|e| e.to_string())?;
            if !no_simplify {
                p = simplify(&p);
            }
            let invariants = abelianize(&p);
            match format {
                Format::Text => Ok(format!(
                    "{}abelianization: {}\n",
                    render_presentation_text(&p),
                    abelian_text(&invariants)
                )),
                Format::Json => {
                    let body = presentation_json(&p, &parsed.symbols);
                    Ok(format!(
                        "{}\n",
                        serde_json::json!({
                            "generators": body.generators,
                            "relators": body.relators,
                            "abelianization": invariants,
                        })
                    ))
                }
            }
        }
        Command::Bottleneck {
            diagram_a,
            diagram_b,
            dim,
        } => {
            let load = |path: &str| -> Result<Diagram, String> {
                diagram_from_json(&read_text(path)?).map_err(|e| format!("{path}: {e}"))
            };
            let a = load(&diagram_a)?;
            let b = load(&diagram_b)?;
            let d = bottleneck_distance(&a, &b, dim).map_err(|e| e.to_string())?;
            Ok(format!("bottleneck distance (dim {dim}) = {d}\n"))
        }
        Command::MvCheck {
            parent,
            x,
            y,
            format,
        } => {
            let parent_parsed =
                parse_complex(&read_text(&parent)?).map_err(|e| format!("{parent}: {e}"))?;
            let load = |path: &str| -> Result<betti::SimplicialComplex, String> {
                Ok(
                    parse_complex_with(&read_text(path)?, &parent_parsed.symbols)
                        .map_err(|e| format!("{path}: {e}"))?
                        .complex,
                )
            };
            let reports = mayer_vietoris_check(&parent_parsed.complex, &load(&x)?, &load(&y)?)
                .map_err(|e| e.to_string())?;
            match format {
                Format::Text => {
                    let mut out = String::new();
                    for r in &reports {
                        out.push_str(&format!(
                            "k={}: {} = {} + {} - {} + {} + {}  {}\n",
                            r.k,
                            r.union_betti,
                            r.x_betti,
                            r.y_betti,
                            r.intersection_betti,
                            r.rank_n_k,
                            r.rank_n_km1,
                            if r.holds { "ok" } else { "FAIL" }
                        ));
                    }
                    if reports.iter().all(|r| r.holds) {
                        out.push_str("identity holds in every dimension\n");
                        Ok(out)
                    } else {
                        Err(format!("{out}rank identity failed"))
                    }
                }
                Format::Json => {
                    if reports.iter().all(|r| r.holds) {
                        Ok(format!(
                            "{}\n",
                            serde_json::to_string(&reports).expect("reports serialize")
                        ))
                    } else {
                        Err("rank identity failed".to_string())
                    }
                }
            }
        }
    }
}

fn cell_label(cell: &Cell, symbols: &SymbolTable) -> String {
    match cell {
        Cell::Simplex(s) => symbols.simplex_labels(s).join(" "),
        Cell::Cube(c) => c.to_string(),
    }
}

fn alpha(cloud: &PointCloud, seed: u64) -> Result<Filtration, String> {
    betti::alpha_filtration_2d(cloud, seed).map_err(|e| e.to_string())
}

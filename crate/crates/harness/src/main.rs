use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use obaire::format::{self, Automaton};
use obaire::transducer::{self, TwoTapeTransducer};
use obaire::{baire, determinize, membership, topology};
use obaire::{Alphabet, BuchiAutomaton, Result, UPWord};

use obaire_cli::check::{self, CheckReport};
use obaire_cli::corpus::{self, LassoCorpus};

#[derive(Parser)]
#[command(name = "obaire", about = "Baire-property toolkit for omega-regular languages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Bounds {
    /// Lasso corpus bounds as "P,Q" (max prefix, max period).
    #[arg(long, default_value = "3,3", value_parser = parse_bounds)]
    bounds: (usize, usize),
}

fn parse_bounds(s: &str) -> std::result::Result<(usize, usize), String> {
    let (p, q) = s.split_once(',').ok_or("expected P,Q")?;
    Ok((
        p.trim().parse().map_err(|_| "expected P,Q")?,
        q.trim().parse().map_err(|_| "expected P,Q")?,
    ))
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an ultimately periodic word is in the language.
    Member {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Decide emptiness; a nonempty language exits 1 with a witness lasso.
    Empty { file: PathBuf },
    /// Report the topological class (open / closed / Sigma^0_2 / Pi^0_2).
    Classify { file: PathBuf },
    /// Topological closure, as a Buchi automaton.
    Closure {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Topological interior, as a Buchi automaton.
    Interior {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Complement, as a Buchi automaton.
    Complement {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Determinize a Buchi automaton into a Muller automaton.
    Determinize {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Decompose L(A) as an open set B modulo a meager set C and emit both.
    Baire {
        file: PathBuf,
        /// Directory for the emitted .oaut files (default: alongside input).
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Decide meagerness; a nonmeager language exits 1 with a witness.
    Meager { file: PathBuf },
    /// Decide comeagerness; a noncomeager language exits 1 with a witness.
    Comeager { file: PathBuf },
    /// Limit language W^delta of a finite-word automaton.
    Wdelta {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Apply an omega-rational function to an ultimately periodic word.
    Eval {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Domain of the transducer relation, as a Buchi automaton.
    Dom {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Image of the transducer relation, as a Buchi automaton.
    Im {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Preimage of the basic open set u.Sigma^omega under the function.
    Preimage {
        file: PathBuf,
        /// Output prefix u.
        #[arg(long)]
        prefix: String,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Dense Pi^0_2 restriction set on which the function is continuous.
    Restrict {
        file: PathBuf,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Empirically probe continuity of the restricted function at a point.
    Probe {
        file: PathBuf,
        #[arg(long)]
        word: String,
        /// Restriction set to probe; constructed from the transducer if absent.
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        #[arg(long, default_value_t = 12)]
        k_max: u32,
        #[arg(long, default_value_t = 4)]
        lasso_bound: usize,
    },
    /// Verify an (A, B, C) decomposition triple; with A alone the triple is
    /// constructed and certificate-checked in full.
    CheckBaire {
        a: PathBuf,
        b: Option<PathBuf>,
        c: Option<PathBuf>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Compare two automata pointwise on the lasso corpus.
    OracleCompare {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Generate a seeded corpus of random automata or transducers.
    GenCorpus {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 5)]
        max_states: usize,
        /// One of: nba, dma, trans.
        #[arg(long, default_value = "nba")]
        kind: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn read_automaton(path: &Path) -> Result<Automaton> {
    let text = fs::read_to_string(path)
        .map_err(|e| obaire::Error::Malformed(format!("{}: {e}", path.display())))?;
    format::parse_oaut(&text)
}

fn read_buchi(path: &Path) -> Result<BuchiAutomaton> {
    read_automaton(path)?.expect_buchi()
}

fn read_transducer(path: &Path) -> Result<TwoTapeTransducer> {
    let text = fs::read_to_string(path)
        .map_err(|e| obaire::Error::Malformed(format!("{}: {e}", path.display())))?;
    format::parse_otrans(&text)
}

fn write_or_print(emitted: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, emitted)
            .map_err(|e| obaire::Error::Malformed(format!("{}: {e}", path.display()))),
        None => {
            print!("{emitted}");
            Ok(())
        }
    }
}

fn parse_prefix(a: &Alphabet, s: &str) -> Result<Vec<char>> {
    let chars: Vec<char> = s.chars().collect();
    for &c in &chars {
        a.index_of(c)?;
    }
    Ok(chars)
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into())
}

fn sibling_dir(path: &Path, out_dir: &Option<PathBuf>) -> PathBuf {
    out_dir
        .clone()
        .unwrap_or_else(|| path.parent().map(Path::to_path_buf).unwrap_or_else(|| ".".into()))
}

fn write_oaut(dir: &Path, name: &str, a: &Automaton) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, format::emit_oaut(a))
        .map_err(|e| obaire::Error::Malformed(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn report_verdict(report: &CheckReport) -> Result<bool> {
    println!("{}", serde_json::to_string(report).expect("report serializes"));
    Ok(report.verdict)
}

/// Ok(true) = pass (exit 0), Ok(false) = fail/counterexample (exit 1).
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Member { file, word } => {
            let a = read_automaton(&file)?;
            let x = UPWord::parse(&word)?;
            let yes = match &a {
                Automaton::Buchi(b) => membership::member_buchi(b, &x)?,
                Automaton::Muller(m) => membership::member_muller(m, &x)?,
                Automaton::Finite(_) => {
                    return Err(obaire::Error::Precondition("an omega-automaton".into()))
                }
            };
            println!("{yes}");
            Ok(yes)
        }
        Command::Empty { file } => {
            let a = read_automaton(&file)?;
            let witness = match &a {
                Automaton::Buchi(b) => membership::accepting_lasso(b),
                Automaton::Muller(m) => membership::accepting_lasso(&determinize::muller_to_buchi(m)?),
                Automaton::Finite(_) => {
                    return Err(obaire::Error::Precondition("an omega-automaton".into()))
                }
            };
            match witness {
                None => {
                    println!("empty: true");
                    Ok(true)
                }
                Some(x) => {
                    println!("empty: false");
                    println!("witness: {x}");
                    Ok(false)
                }
            }
        }
        Command::Classify { file } => {
            let report = match read_automaton(&file)? {
                Automaton::Buchi(b) => topology::classify(&b)?,
                Automaton::Muller(m) => topology::classify_muller(&m)?,
                Automaton::Finite(_) => {
                    return Err(obaire::Error::Precondition("an omega-automaton".into()))
                }
            };
            println!(
                "{}",
                json!({
                    "is_open": report.is_open,
                    "is_closed": report.is_closed,
                    "is_sigma2": report.is_sigma2,
                    "is_pi2": report.is_pi2,
                })
            );
            Ok(true)
        }
        Command::Closure { file, out } => {
            let a = topology::closure(&read_buchi(&file)?)?;
            write_or_print(&format::emit_oaut(&Automaton::Buchi(a)), &out)?;
            Ok(true)
        }
        Command::Interior { file, out } => {
            let a = topology::interior(&read_buchi(&file)?)?;
            write_or_print(&format::emit_oaut(&Automaton::Buchi(a)), &out)?;
            Ok(true)
        }
        Command::Complement { file, out } => {
            let a = determinize::complement(&read_buchi(&file)?)?;
            write_or_print(&format::emit_oaut(&Automaton::Buchi(a)), &out)?;
            Ok(true)
        }
        Command::Determinize { file, out } => {
            let m = determinize::determinize(&read_buchi(&file)?)?;
            write_or_print(&format::emit_oaut(&Automaton::Muller(m)), &out)?;
            Ok(true)
        }
        Command::Baire { file, out_dir } => {
            let dec = match read_automaton(&file)? {
                Automaton::Buchi(b) => baire::automatic_baire(&b)?,
                Automaton::Muller(m) => baire::automatic_baire_muller(&m)?,
                Automaton::Finite(_) => {
                    return Err(obaire::Error::Precondition("an omega-automaton".into()))
                }
            };
            let dir = sibling_dir(&file, &out_dir);
            let s = stem(&file);
            let b_path =
                write_oaut(&dir, &format!("{s}.open.oaut"), &Automaton::Buchi(dec.open_part()))?;
            let c_path = write_oaut(
                &dir,
                &format!("{s}.meager.oaut"),
                &Automaton::Buchi(dec.meager_part.automaton()),
            )?;
            println!(
                "{}",
                json!({
                    "open": b_path.display().to_string(),
                    "meager": c_path.display().to_string(),
                    "open_empty": dec.open_part_is_empty(),
                    "pieces": dec.meager_part.num_pieces(),
                    "case_trace": dec.trace,
                })
            );
            Ok(true)
        }
        Command::Meager { file } => {
            let a = read_buchi(&file)?;
            if baire::is_meager(&a)? {
                println!("meager: true");
                Ok(true)
            } else {
                println!("meager: false");
                // a nonmeager set is comeager in some basic open set: any
                // lasso reaching that cylinder witnesses the failure
                let dec = baire::automatic_baire(&a)?;
                if let Some(x) = membership::accepting_lasso(&dec.open_part()) {
                    println!("witness: {x}");
                }
                Ok(false)
            }
        }
        Command::Comeager { file } => {
            let a = read_buchi(&file)?;
            if baire::is_comeager(&a)? {
                println!("comeager: true");
                Ok(true)
            } else {
                println!("comeager: false");
                let co = determinize::complement(&a)?;
                let dec = baire::automatic_baire(&co)?;
                if let Some(x) = membership::accepting_lasso(&dec.open_part()) {
                    println!("witness: {x}");
                }
                Ok(false)
            }
        }
        Command::Wdelta { file, out } => {
            let w = read_automaton(&file)?.expect_finite()?;
            let a = topology::w_delta(&w)?;
            write_or_print(&format::emit_oaut(&Automaton::Buchi(a)), &out)?;
            Ok(true)
        }
        Command::Eval { file, word } => {
            let t = read_transducer(&file)?;
            let x = UPWord::parse(&word)?;
            println!("{}", transducer::evaluate(&t, &x)?.canonical());
            Ok(true)
        }
        Command::Dom { file, out } => {
            let a = transducer::dom(&read_transducer(&file)?)?;
            write_or_print(&format::emit_oaut(&Automaton::Buchi(a)), &out)?;
            Ok(true)
        }
        Command::Im { file, out } => {
            let a = transducer::im(&read_transducer(&file)?)?;
            write_or_print(&format::emit_oaut(&Automaton::Buchi(a)), &out)?;
            Ok(true)
        }
        Command::Preimage { file, prefix, out } => {
            let t = read_transducer(&file)?;
            let u = parse_prefix(t.output_alphabet(), &prefix)?;
            let a = transducer::preimage_basic(&t, &u)?;
            write_or_print(&format::emit_oaut(&Automaton::Buchi(a)), &out)?;
            Ok(true)
        }
        Command::Restrict { file, out_dir } => {
            let t = read_transducer(&file)?;
            let cert = transducer::continuity_restriction(&t)?;
            let dir = sibling_dir(&file, &out_dir);
            let s = stem(&file);
            let g_path =
                write_oaut(&dir, &format!("{s}.restrict.oaut"), &Automaton::Buchi(cert.g.clone()))?;
            let f_path = write_oaut(
                &dir,
                &format!("{s}.error.oaut"),
                &Automaton::Buchi(cert.error_set.clone()),
            )?;
            println!(
                "{}",
                json!({
                    "restriction": g_path.display().to_string(),
                    "error_set": f_path.display().to_string(),
                    "density_checked": cert.density_checked,
                    "prefix_levels": cert.per_n_data.len(),
                })
            );
            Ok(true)
        }
        Command::Probe { file, word, cert, n_max, k_max, lasso_bound } => {
            let t = read_transducer(&file)?;
            let x = UPWord::parse(&word)?;
            let g = match cert {
                Some(path) => read_buchi(&path)?,
                None => transducer::continuity_restriction(&t)?.g,
            };
            let report = transducer::restricted_continuity_probe(&t, &g, &x, n_max, k_max, lasso_bound)?;
            let entries: Vec<_> = report
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "n": e.n,
                        "modulus": e.modulus,
                        "witness": e.witness.as_ref().map(|(w, din, dout)| {
                            json!({
                                "word": w.to_string(),
                                "input_distance": din.to_string(),
                                "output_distance": dout.to_string(),
                            })
                        }),
                    })
                })
                .collect();
            println!(
                "{}",
                json!({
                    "x": report.x.to_string(),
                    "violation": report.violation,
                    "entries": entries,
                })
            );
            Ok(!report.violation)
        }
        Command::CheckBaire { a, b, c, bounds } => {
            let (p, q) = bounds.bounds;
            let source = read_automaton(&a)?;
            let corpus = LassoCorpus::new(source.alphabet().clone(), p, q);
            let report = match (b, c) {
                (Some(b), Some(c)) => check::check_baire_triple_files(
                    &source.expect_buchi()?,
                    &read_buchi(&b)?,
                    &read_buchi(&c)?,
                    &corpus,
                )?,
                (None, None) => {
                    let dec = match &source {
                        Automaton::Buchi(b) => baire::automatic_baire(b)?,
                        Automaton::Muller(m) => baire::automatic_baire_muller(m)?,
                        Automaton::Finite(_) => {
                            return Err(obaire::Error::Precondition("an omega-automaton".into()))
                        }
                    };
                    check::check_baire_triple(&source, &dec, &corpus)?
                }
                _ => {
                    return Err(obaire::Error::Precondition(
                        "either one automaton or a full (A, B, C) triple".into(),
                    ))
                }
            };
            report_verdict(&report)
        }
        Command::OracleCompare { a, b, bounds } => {
            let (p, q) = bounds.bounds;
            let a1 = read_automaton(&a)?;
            let a2 = read_automaton(&b)?;
            let corpus = LassoCorpus::new(a1.alphabet().clone(), p, q);
            let report = check::oracle_compare(&a1, &a2, &corpus)?;
            report_verdict(&report)
        }
        Command::GenCorpus { seed, count, max_states, kind, out_dir } => {
            fs::create_dir_all(&out_dir)
                .map_err(|e| obaire::Error::Malformed(format!("{}: {e}", out_dir.display())))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alphabet = Alphabet::ab();
            for i in 0..count {
                let (name, text) = match kind.as_str() {
                    "nba" => {
                        let a = corpus::random_nba(&mut rng, &alphabet, max_states);
                        (format!("nba_{i:03}.oaut"), format::emit_oaut(&Automaton::Buchi(a)))
                    }
                    "dma" => {
                        let m = corpus::random_dma(&mut rng, &alphabet, max_states);
                        (format!("dma_{i:03}.oaut"), format::emit_oaut(&Automaton::Muller(m)))
                    }
                    "trans" => {
                        let t = corpus::random_sync_functional(&mut rng, &alphabet, max_states)?;
                        (format!("trans_{i:03}.otrans"), format::emit_otrans(&t))
                    }
                    other => {
                        return Err(obaire::Error::Precondition(format!(
                            "corpus kind nba, dma, or trans (got {other})"
                        )))
                    }
                };
                let path = out_dir.join(name);
                fs::write(&path, text)
                    .map_err(|e| obaire::Error::Malformed(format!("{}: {e}", path.display())))?;
                println!("{}", path.display());
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

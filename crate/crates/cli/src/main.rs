//! `commentmap` command-line driver.
//!
//! Settings resolve as flag, then `--config` TOML file, then built-in
//! default. Usage errors exit with 2, pipeline failures with 1.

mod settings;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use commentmap::corpus::{compute_stats, read_catalog, CommentSet, EmoticonMatcher, InputFormat};
use commentmap::fixture::{generate, FixtureSpec};
use commentmap::nlp::Tokenizer;
use commentmap::pipeline::{song_layout, song_tags, Analyzer};
use commentmap::Execution;
use commentmap_service::{AppState, ServiceConfig};

use settings::{usage, FileConfig, PipelineFlags, UsageError};

#[derive(Debug, Parser)]
#[command(
    name = "commentmap",
    version,
    about = "Comment map layouts and preview tags for music comments"
)]
struct Cli {
    /// TOML file with defaults for any flag (keys use underscores).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run every stage on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Io {
    /// Comment file (.jsonl or .csv).
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Song catalog (.jsonl of {id,title,artist,album}).
    #[arg(long)]
    catalog: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate and normalize a corpus, writing sorted JSONL.
    Ingest(#[command(flatten)] Io),
    /// Print descriptive corpus statistics.
    Stats(#[command(flatten)] Io),
    /// Keywords, sentiment and mechanism per comment, as JSONL.
    Analyze {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// Build one song's map layout document.
    Layout {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        song: Option<String>,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// Eight preview tags per song.
    Tags {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// Start the HTTP service.
    Serve {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        data_dir: Option<PathBuf>,
        #[command(flatten)]
        flags: PipelineFlags,
    },
    /// Write a synthetic corpus with planted topics and bursts.
    GenFixture {
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the song catalog here.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long)]
        topics: Option<usize>,
        #[arg(long)]
        comments: Option<usize>,
        #[arg(long)]
        songs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let file = match &cli.config {
        Some(p) => FileConfig::read(p)?,
        None => FileConfig::default(),
    };
    let exec = if cli.sequential || file.sequential.unwrap_or(false) {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Ingest(io) => {
            let set = load(&io, &file)?;
            let mut buf = Vec::new();
            set.export_jsonl(&mut buf)?;
            emit(out_path(&io, &file).as_deref(), &buf)
        }
        Command::Stats(io) => {
            let set = load(&io, &file)?;
            let stats = compute_stats(&set, &Tokenizer::default(), &EmoticonMatcher::default())
                .context("stats stage failed")?;
            emit_json(out_path(&io, &file).as_deref(), &stats)
        }
        Command::Analyze { io, flags } => {
            let set = load(&io, &file)?;
            let config = flags.resolve(&file)?;
            let analyzer = Analyzer::baseline(&config.keywords);
            let comments: Vec<_> = set.comments().iter().collect();
            let rows = analyzer.analyze(&comments, exec).context("analyze stage failed")?;
            let mut buf = Vec::new();
            for row in rows {
                serde_json::to_writer(&mut buf, &row)?;
                buf.push(b'\n');
            }
            emit(out_path(&io, &file).as_deref(), &buf)
        }
        Command::Layout { io, song, flags } => {
            let set = load(&io, &file)?;
            let config = flags.resolve(&file)?;
            let song = match song.or_else(|| file.song.clone()) {
                Some(s) => s,
                None => {
                    let ids: Vec<&str> = set.song_ids().collect();
                    match ids.as_slice() {
                        [only] => only.to_string(),
                        _ => {
                            return Err(usage(format!(
                                "--song is required when the corpus has {} songs",
                                ids.len()
                            )))
                        }
                    }
                }
            };
            let analyzer = Analyzer::baseline(&config.keywords);
            let result = song_layout(&set, &song, &config, &analyzer, exec)?;
            emit(
                out_path(&io, &file).as_deref(),
                result.layout.to_canonical_json().as_bytes(),
            )
        }
        Command::Tags { io, flags } => {
            let set = load(&io, &file)?;
            let config = flags.resolve(&file)?;
            let analyzer = Analyzer::baseline(&config.keywords);
            emit_json(out_path(&io, &file).as_deref(), &song_tags(&set, &analyzer, exec))
        }
        Command::Serve {
            io,
            port,
            data_dir,
            flags,
        } => {
            let set = load(&io, &file)?;
            let pipeline = flags.resolve(&file)?;
            let port = port.or(file.port).unwrap_or(8080);
            let data_dir = data_dir
                .or_else(|| file.data_dir.clone())
                .unwrap_or_else(|| PathBuf::from("commentmap-data"));
            let state = AppState::new(ServiceConfig {
                data_dir,
                pipeline,
                exec,
            })?;
            state.load(set)?;
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(async {
                let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
                eprintln!("listening on {}", listener.local_addr()?);
                commentmap_service::serve(listener, state).await
            })?;
            Ok(())
        }
        Command::GenFixture {
            out,
            catalog,
            topics,
            comments,
            songs,
            seed,
        } => {
            let d = FixtureSpec::default();
            let spec = FixtureSpec {
                topics: topics.or(file.topics).unwrap_or(d.topics),
                comments: comments.or(file.comments).unwrap_or(d.comments),
                songs: songs.or(file.songs).unwrap_or(d.songs),
                seed: seed.or(file.seed).unwrap_or(d.seed),
                ..d
            };
            if spec.topics == 0 || spec.songs == 0 || spec.comments == 0 {
                return Err(usage("--topics, --songs and --comments must be positive"));
            }
            let fixture = generate(&spec);
            let set = CommentSet::from_comments(fixture.comments)?;
            let mut buf = Vec::new();
            set.export_jsonl(&mut buf)?;
            emit(out.or_else(|| file.out.clone()).as_deref(), &buf)?;
            if let Some(path) = catalog {
                let mut buf = Vec::new();
                for entry in &fixture.catalog {
                    serde_json::to_writer(&mut buf, entry)?;
                    buf.push(b'\n');
                }
                emit(Some(&path), &buf)?;
            }
            Ok(())
        }
    }
}

fn out_path(io: &Io, file: &FileConfig) -> Option<PathBuf> {
    io.out.clone().or_else(|| file.out.clone())
}

fn load(io: &Io, file: &FileConfig) -> Result<CommentSet> {
    let input = io
        .input
        .clone()
        .or_else(|| file.input.clone())
        .ok_or_else(|| usage("--in is required"))?;
    let mut set = CommentSet::ingest(&input, InputFormat::from_path(&input))
        .with_context(|| format!("ingest stage failed for {}", input.display()))?;
    if let Some(cat) = io.catalog.clone().or_else(|| file.catalog.clone()) {
        set = set.with_catalog(read_catalog(&cat).with_context(|| format!("reading catalog {}", cat.display()))?);
    }
    Ok(set)
}

fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(bytes)?;
            Ok(())
        }
    }
}

fn emit_json<T: serde::Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    emit(path, s.as_bytes())
}

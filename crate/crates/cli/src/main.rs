use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quizboard_core::bank::{compile_bank, load_bank, parse_question_csv, validate_bank};
use quizboard_core::selfplay::{self, SelfPlayConfig, SelfPlayError};
use quizboard_core::{GameKind, SpeedMode};
use quizboard_service::{ServeConfig, ServeError, Service};

/// Exit status when input files fail parsing or validation.
const EXIT_INVALID: u8 = 1;
/// Exit status when self-play found an invariant violation or a stalled game.
const EXIT_INVARIANT: u8 = 2;
/// Exit status for I/O and environment failures.
const EXIT_ENVIRONMENT: u8 = 3;

#[derive(Parser)]
#[command(name = "quizboard", version, about = "Quiz-gated board games: tools and service")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a question CSV into a bank JSON file.
    Compile {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check a compiled bank and its image references.
    Validate {
        bank: PathBuf,
        #[arg(long)]
        images: PathBuf,
    },
    /// Play games automatically and report statistics.
    Selfplay {
        #[arg(long)]
        game: GameKind,
        #[arg(long, default_value = "classic")]
        mode: SpeedMode,
        #[arg(long, default_value_t = 1000)]
        games: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0.7)]
        p_correct: f64,
        #[arg(long, default_value_t = 4)]
        teams: usize,
        /// Worker threads (0 = one per CPU). Results are identical for any value.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Also write the report as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run the game service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        #[arg(long)]
        bank: PathBuf,
        #[arg(long)]
        assets: PathBuf,
        /// Also accept raw newline-delimited JSON over TCP on this port.
        #[arg(long)]
        line_port: Option<u16>,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    // usage errors share the input-failure status; 2 is reserved for invariants
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_INVALID) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Compile { input, output } => compile(&input, &output),
        Command::Validate { bank, images } => validate(&bank, &images),
        Command::Selfplay { game, mode, games, seed, p_correct, teams, jobs, json } => {
            let config = SelfPlayConfig { kind: game, mode, teams, games, seed, p_correct, jobs };
            self_play(&config, json.as_deref())
        }
        Command::Serve { port, host, bank, assets, line_port } => serve(ServeConfig {
            addr: SocketAddr::new(host, port),
            line_addr: line_port.map(|p| SocketAddr::new(host, p)),
            bank_path: bank,
            asset_root: assets,
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

type Failure = (u8, String);

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| (EXIT_ENVIRONMENT, format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| (EXIT_ENVIRONMENT, format!("cannot write {}: {e}", path.display())))
}

fn compile(input: &Path, output: &Path) -> Result<(), Failure> {
    let bank = match parse_question_csv(&read(input)?) {
        Ok(bank) => bank,
        Err(errors) => {
            for e in &errors {
                eprintln!("{}: {e}", input.display());
            }
            return Err((EXIT_INVALID, format!("{} error(s) in {}", errors.len(), input.display())));
        }
    };
    write(output, &compile_bank(&bank))?;
    println!("compiled {} questions into {}", bank.question_count(), output.display());
    for (code, lang) in &bank.languages {
        for topic in &lang.topics {
            println!("  {code}  {:<28} {:>4}  {}", topic.id, topic.questions.len(), topic.name);
        }
    }
    Ok(())
}

fn validate(bank_path: &Path, images: &Path) -> Result<(), Failure> {
    let bank = load_bank(&read(bank_path)?).map_err(|e| (EXIT_INVALID, format!("{}: {e}", bank_path.display())))?;
    let issues = validate_bank(&bank, images);
    for issue in &issues {
        println!("{issue}");
    }
    if issues.is_empty() {
        println!("{}: {} questions, no issues", bank_path.display(), bank.question_count());
        Ok(())
    } else {
        Err((EXIT_INVALID, format!("{} issue(s) in {}", issues.len(), bank_path.display())))
    }
}

fn self_play(config: &SelfPlayConfig, json: Option<&Path>) -> Result<(), Failure> {
    let report = selfplay::run(config).map_err(|e| match e {
        SelfPlayError::Stalled { .. } => (EXIT_INVARIANT, e.to_string()),
        SelfPlayError::Pool(_) => (EXIT_ENVIRONMENT, e.to_string()),
        _ => (EXIT_INVALID, e.to_string()),
    })?;
    println!("{report}");
    let encoded = serde_json::to_string_pretty(&report).expect("reports serialize");
    println!("{encoded}");
    if let Some(path) = json {
        write(path, format!("{encoded}\n").as_bytes())?;
    }
    if report.violations > 0 {
        return Err((EXIT_INVARIANT, format!("{} invariant violation(s)", report.violations)));
    }
    Ok(())
}

fn serve(config: ServeConfig) -> Result<(), Failure> {
    let runtime = tokio::runtime::Runtime::new().map_err(|e| (EXIT_ENVIRONMENT, e.to_string()))?;
    runtime.block_on(async {
        let service = Service::bind(config).await.map_err(|e| match e {
            ServeError::BankLoad { .. } => (EXIT_INVALID, e.to_string()),
            ServeError::Bind { .. } => (EXIT_ENVIRONMENT, e.to_string()),
        })?;
        let addr = service.local_addr().map_err(|e| (EXIT_ENVIRONMENT, e.to_string()))?;
        println!("listening on http://{addr} (websocket at /ws, images at /assets)");
        if let Some(lines) = service.line_addr() {
            println!("line protocol on tcp://{lines}");
        }
        tokio::select! {
            res = service.run() => res.map_err(|e| (EXIT_ENVIRONMENT, e.to_string())),
            _ = tokio::signal::ctrl_c() => {
                log::info!("shutting down");
                Ok(())
            }
        }
    })
}

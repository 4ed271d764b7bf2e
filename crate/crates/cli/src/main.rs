mod commands;
mod options;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use options::{
    CleanArgs, ConcordArgs, CorpusArgs, CutoffArgs, EvalArgs, InduceArgs, RunArgs, SnapshotArgs, SynthArgs,
};

/// Translation lexicon induction and cleaning.
#[derive(Parser, Debug)]
#[command(name = "lexclean", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count co-occurrences and write the initial G² lexicon.
    Induce {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        induce: InduceArgs,
    },
    /// Run competitive linking and regrading to a fixed point.
    Clean {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        induce: InduceArgs,
        #[command(flatten)]
        clean: CleanArgs,
    },
    /// Filter a regraded lexicon at a plateau or score.
    Cutoff {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        snapshot: SnapshotArgs,
        #[command(flatten)]
        cutoff: CutoffArgs,
    },
    /// One-pass greedy lexicon: every pair above a G² threshold.
    Baseline {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        induce: InduceArgs,
    },
    /// Recall, gold precision and precision samples for a lexicon.
    Eval {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        snapshot: SnapshotArgs,
        #[command(flatten)]
        cutoff: CutoffArgs,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Aligned segment pairs containing both words of an entry.
    Concord {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[command(flatten)]
        concord: ConcordArgs,
    },
    /// Generate a seeded synthetic bitext and its true lexicon.
    Synth {
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        synth: SynthArgs,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io { path: PathBuf, source: std::io::Error },
    Run(lexclean::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_owned(),
            source,
        }
    }
}

impl From<lexclean::Error> for CliError {
    fn from(e: lexclean::Error) -> Self {
        CliError::Run(e)
    }
}

/// The config file, read once and handed to every flag group.
struct ConfigFile(toml::Table);

impl ConfigFile {
    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(ConfigFile(toml::Table::new()));
        };
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let table: toml::Table = text
            .parse()
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        if let Some(key) = table.keys().find(|k| !options::CONFIG_KEYS.contains(&k.as_str())) {
            return Err(CliError::Usage(format!("{}: unknown key `{key}`", path.display())));
        }
        Ok(ConfigFile(table))
    }

    fn group<T: serde::de::DeserializeOwned>(&self) -> Result<T, CliError> {
        self.0
            .clone()
            .try_into()
            .map_err(|e| CliError::Usage(format!("config file: {e}")))
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Induce {
            mut run,
            mut corpus,
            mut induce,
        } => {
            let file = ConfigFile::load(run.config.as_deref())?;
            run.merge(&file.group()?);
            corpus.merge(&file.group()?);
            induce.merge(&file.group()?);
            run.resolve()?;
            corpus.resolve()?;
            induce.resolve()?;
            commands::induce(&run, &corpus, &induce)
        }
        Command::Clean {
            mut run,
            mut corpus,
            mut induce,
            mut clean,
        } => {
            let file = ConfigFile::load(run.config.as_deref())?;
            run.merge(&file.group()?);
            corpus.merge(&file.group()?);
            induce.merge(&file.group()?);
            clean.merge(&file.group()?);
            run.resolve()?;
            corpus.resolve()?;
            induce.resolve()?;
            clean.resolve(lexclean::pipeline::CleanConfig::default().max_iterations)?;
            commands::clean(&run, &corpus, &induce, &clean)
        }
        Command::Cutoff {
            mut run,
            mut snapshot,
            mut cutoff,
        } => {
            let file = ConfigFile::load(run.config.as_deref())?;
            run.merge(&file.group()?);
            snapshot.merge(&file.group()?);
            cutoff.merge(&file.group()?);
            run.resolve()?;
            snapshot.resolve()?;
            let spec = cutoff
                .spec()?
                .ok_or_else(|| CliError::Usage("give --plateau or --min-log-score".into()))?;
            commands::cutoff(&run, &snapshot, &cutoff, spec)
        }
        Command::Baseline {
            mut run,
            mut corpus,
            mut induce,
        } => {
            let file = ConfigFile::load(run.config.as_deref())?;
            run.merge(&file.group()?);
            corpus.merge(&file.group()?);
            induce.merge(&file.group()?);
            run.resolve()?;
            corpus.resolve()?;
            induce.resolve()?;
            commands::baseline(&run, &corpus, &induce)
        }
        Command::Eval {
            mut run,
            mut corpus,
            mut snapshot,
            mut cutoff,
            mut eval,
        } => {
            let file = ConfigFile::load(run.config.as_deref())?;
            run.merge(&file.group()?);
            corpus.merge(&file.group()?);
            snapshot.merge(&file.group()?);
            cutoff.merge(&file.group()?);
            eval.merge(&file.group()?);
            run.resolve()?;
            corpus.resolve()?;
            snapshot.resolve()?;
            eval.resolve()?;
            let spec = cutoff.spec()?;
            commands::eval(&run, &corpus, &snapshot, &cutoff, spec, &eval)
        }
        Command::Concord {
            mut run,
            mut corpus,
            mut concord,
        } => {
            let file = ConfigFile::load(run.config.as_deref())?;
            run.merge(&file.group()?);
            corpus.merge(&file.group()?);
            concord.merge(&file.group()?);
            run.resolve()?;
            corpus.resolve()?;
            concord.resolve()?;
            commands::concord(&run, &corpus, &concord)
        }
        Command::Synth { mut run, mut synth } => {
            let file = ConfigFile::load(run.config.as_deref())?;
            run.merge(&file.group()?);
            synth.merge(&file.group()?);
            run.resolve()?;
            let config = synth.resolve();
            commands::synth(&run, &synth, &config)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(CliError::Io { path, source }) => {
            eprintln!("error: io: {}: {source}", path.display());
            ExitCode::FAILURE
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {}: {e}", e.category());
            ExitCode::FAILURE
        }
    }
}

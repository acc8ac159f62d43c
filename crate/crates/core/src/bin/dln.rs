use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dln::cli::{self, OutputFormat, ProfileKind, QuerySource, RunConfig};
use dln::defeasible::PriorityMode;
use dln::postulates::Rule;

/// Defeasible reasoning over ALC knowledge bases with normality concepts.
#[derive(Parser)]
#[command(name = "dln", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the KB nonmonotonically entails each query.
    Entails {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// List inconsistent and consistent prototypes.
    Prototypes {
        #[command(flatten)]
        common: Common,
    },
    /// Show every keep/override decision of the reduction for a query.
    Explain {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        query: QueryArgs,
    },
    /// Sweep a KLM postulate over generated knowledge bases (or over --kb).
    CheckPostulates {
        #[command(flatten)]
        common: Common,
        /// REF, CT, CM, LLE, RW, REF_N, CT_N, CM_N, LLE_N, RW_N, OR_N or RM_N.
        #[arg(long)]
        rule: Rule,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        #[arg(long, value_enum)]
        profile: Option<ProfileArg>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_name = "PATH")]
    kb: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "specificity")]
    priority: PriorityArg,
    /// Give every consistent concept name a normal instance.
    #[arg(long)]
    assume_nonempty_prototypes: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    #[arg(long, value_name = "N", default_value_t = dln::classical::DEFAULT_NODE_BUDGET)]
    node_budget: usize,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct QueryArgs {
    #[arg(long, value_name = "TEXT")]
    query: Option<String>,
    #[arg(long, value_name = "PATH")]
    query_file: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PriorityArg {
    Specificity,
    Rank,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    WithNormality,
    NormalityFree,
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            kb_path: self.kb.clone(),
            priority_mode: match self.priority {
                PriorityArg::Specificity => PriorityMode::Specificity,
                PriorityArg::Rank => PriorityMode::Rank,
            },
            nonempty_prototypes: self.assume_nonempty_prototypes,
            output_format: match self.format {
                FormatArg::Text => OutputFormat::Text,
                FormatArg::Json => OutputFormat::Json,
            },
            node_budget: self.node_budget,
        }
    }
}

impl QueryArgs {
    fn source(&self) -> QuerySource {
        match (&self.query, &self.query_file) {
            (Some(q), _) => QuerySource::Text(q.clone()),
            (None, Some(p)) => QuerySource::File(p.clone()),
            (None, None) => unreachable!("clap requires one of the query flags"),
        }
    }
}

fn main() -> ExitCode {
    let outcome = match Cli::parse().command {
        Command::Entails { common, query } => cli::cmd_entails(&common.config(), &query.source()),
        Command::Prototypes { common } => cli::cmd_prototypes(&common.config()),
        Command::Explain { common, query } => cli::cmd_explain(&common.config(), &query.source()),
        Command::CheckPostulates {
            common,
            rule,
            seeds,
            profile,
        } => cli::cmd_check_postulates(
            &common.config(),
            rule,
            seeds,
            profile.map(|p| match p {
                ProfileArg::WithNormality => ProfileKind::WithNormality,
                ProfileArg::NormalityFree => ProfileKind::NormalityFree,
            }),
        ),
    };
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    ExitCode::from(outcome.exit_code as u8)
}

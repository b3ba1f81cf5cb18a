use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spinon_core::ff_finite::Route;

#[derive(Parser, Debug)]
#[command(name = "spinon", version, about = "Two-spinon sigma^z form factors of the periodic XXX chain")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve the Bethe equations for the ground state.
    #[command(after_help = STATE_SCHEMA)]
    Ground(StateArgs),
    /// Solve the Bethe equations for a two-spinon triplet.
    #[command(after_help = STATE_SCHEMA)]
    Excite(ExciteArgs),
    /// Finite-chain |F_z|^2 for one hole pair.
    #[command(after_help = "CSV columns: M,slot_a,slot_b,mu_h1,mu_h2,route,value,scaled,rel_diff,bits_used")]
    Ff(FfArgs),
    /// Thermodynamic-limit scaled form factor by both closed forms.
    #[command(
        after_help = "CSV columns: mu_h1,mu_h2,dmu,closed_form,integral_rep,rel_diff,zero_by_convention,bits_used"
    )]
    Tdl(TdlArgs),
    /// M^2 |F_z|^2 against the thermodynamic prediction over a list of chain lengths.
    #[command(
        after_help = "CSV columns: M,mu_h1,mu_h2,ff_det_scaled,ff_tdl,rel_dev,bits_used\n\
                      Without --slots each M uses the symmetric pair a = M/8 + 1, b = M/2 + 2 - a."
    )]
    Converge(ConvergeArgs),
    /// Run the exact-diagonalization, Cauchy-identity and Barnes G check suites.
    #[command(after_help = "CSV columns: suite,check,passed,detail,bits_used")]
    Validate(ValidateArgs),
}

pub const STATE_SCHEMA: &str = "JSON: the state record (M, kind, qnums, roots, holes, hole_slots, residual, \
residual_log2, energy, momentum, bits_used).\nCSV columns: M,kind,item,index,value,bits_used";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct StateArgs {
    #[arg(long = "M")]
    pub m: usize,
    /// Working precision in bits (default 12 M, at least 128).
    #[arg(long)]
    pub bits: Option<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ExciteArgs {
    #[arg(long = "M")]
    pub m: usize,
    /// 1-based hole slots among the M/2 + 1 vacancies, as i,j.
    #[arg(long, value_parser = parse_slots)]
    pub slots: (usize, usize),
    #[arg(long)]
    pub bits: Option<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FfArgs {
    #[arg(long = "M")]
    pub m: usize,
    #[arg(long, value_parser = parse_slots)]
    pub slots: (usize, usize),
    #[arg(long, default_value = "det", value_parser = parse_route)]
    pub route: Route,
    #[arg(long)]
    pub bits: Option<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct TdlArgs {
    /// Rapidity difference mu_h1 - mu_h2 (holes placed at +-dmu/2).
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["m", "slots"])]
    pub dmu: Option<f64>,
    /// Chain length whose hole rapidities are used (requires --slots).
    #[arg(long = "M", requires = "slots")]
    pub m: Option<usize>,
    #[arg(long, value_parser = parse_slots, requires = "m")]
    pub slots: Option<(usize, usize)>,
    #[arg(long)]
    pub bits: Option<u32>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[arg(long = "M-list", value_delimiter = ',', num_args = 1..)]
    pub m_list: Vec<usize>,
    #[arg(long, value_parser = parse_slots)]
    pub slots: Option<(usize, usize)>,
    #[arg(long)]
    pub bits: Option<u32>,
    /// Independent chain lengths evaluated in parallel.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[arg(long = "M")]
    pub m: usize,
    /// Directory for cached exact-diagonalization spectra.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    #[arg(long)]
    pub bits: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_slots(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b] = parts.as_slice() else {
        return Err(format!("expected two slots i,j, got '{s}'"));
    };
    let a: usize = a.parse().map_err(|_| format!("bad slot '{a}'"))?;
    let b: usize = b.parse().map_err(|_| format!("bad slot '{b}'"))?;
    Ok((a, b))
}

fn parse_route(s: &str) -> Result<Route, String> {
    s.parse().map_err(|e: spinon_core::Error| e.to_string())
}

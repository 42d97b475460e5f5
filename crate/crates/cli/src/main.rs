use std::process::ExitCode;

use anyhow::Context;
use clap::{Arg, ArgAction, ArgMatches};
use deltalwi_cli::config::{Command, Entries, RunConfig, KEYS};
use deltalwi_cli::run;

fn help(key: &str) -> &'static str {
    match key {
        "kind" => "configuration: a (coupling on 2-3) or b (coupling on 1-2)",
        "phi" => "loop phase in radians; pi, pi/2, 3pi/2 style literals accepted",
        "g_coupling" => "coupling amplitude",
        "g_probe" => "probe amplitude",
        "g_aux" => "auxiliary (1-3) amplitude",
        "detuning" => "probe detuning for single-point commands",
        "d_min" | "d_max" => "detuning scan range",
        "points" => "number of grid or sample points",
        "gamma1" => "decay rate 3->1",
        "gamma2" => "decay rate 2->1",
        "gamma3" => "decay rate 3->2",
        "g_max" => "upper end of the auxiliary amplitude scan",
        "bracket_lo" | "bracket_hi" => "search bracket for the optimal auxiliary amplitude",
        "t_final" => "evolution time in units of 1/gamma",
        "rel_tol" => "integrator relative tolerance",
        "t01" | "t02" | "t12" => "flux-qubit transition matrix element modulus",
        "gamma_ref" => "flux-qubit reference rate in 1/s",
        "t_ref" => "matrix element modulus that decays at gamma_ref",
        "out" => "output file; stdout if absent",
        "format" => "csv or json",
        _ => "",
    }
}

fn cli() -> clap::Command {
    let names: Vec<&'static str> = Command::ALL.iter().map(Command::name).collect();
    let mut cmd = clap::Command::new("deltalwi")
        .about("Phase-sensitive gain without inversion in a driven three-level loop")
        .version(env!("CARGO_PKG_VERSION"))
        .arg(
            Arg::new("command")
                .value_parser(clap::builder::PossibleValuesParser::new(names))
                .help("what to compute; may instead come from the config file"),
        )
        .arg(Arg::new("config").long("config").value_name("FILE").help("key=value file; flags take precedence"))
        .arg(Arg::new("plot").long("plot").action(ArgAction::SetTrue).help("also write a gnuplot script"));
    for key in KEYS.iter().filter(|k| !matches!(**k, "command" | "plot")) {
        cmd = cmd.arg(
            Arg::new(*key).long(key.replace('_', "-")).value_name("VALUE").allow_hyphen_values(true).help(help(key)),
        );
    }
    cmd
}

fn config_from(matches: &ArgMatches) -> anyhow::Result<RunConfig> {
    let mut entries = match matches.get_one::<String>("config") {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))?;
            Entries::parse(&text).with_context(|| path.clone())?
        }
        None => Entries::default(),
    };
    for key in KEYS {
        if *key == "plot" {
            if matches.get_flag("plot") {
                entries.set_flag("plot", "true")?;
            }
        } else if let Some(value) = matches.get_one::<String>(key) {
            entries.set_flag(key, value.as_str())?;
        }
    }
    Ok(RunConfig::from_entries(&entries)?)
}

fn main() -> ExitCode {
    let matches = match cli().try_get_matches() {
        Ok(m) => m,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("deltalwi: {}", text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let result = config_from(&matches).and_then(|cfg| run(&cfg, &mut std::io::stdout().lock()));
    match result {
        Ok(summary) => {
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("deltalwi: {e:#}");
            ExitCode::FAILURE
        }
    }
}

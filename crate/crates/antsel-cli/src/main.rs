use antsel_cli::config::{resolve, CliArgs};
use antsel_cli::output::{print_summary, write_csv};
use antsel_cli::execute;
use antsel_core::SchemeRegistry;
use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args = CliArgs::parse();

    let plan = match resolve(&args) {
        Ok(plan) => plan,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };

    let registry = SchemeRegistry::with_builtins();
    let records = match execute(&plan, &registry) {
        Ok(records) => records,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };

    if let Err(e) = write_csv(&records, &plan.out) {
        eprintln!("error: failed to write {}: {e}", plan.out.display());
        return ExitCode::from(1);
    }

    let mut stdout = std::io::stdout().lock();
    if print_summary(&records, &mut stdout).is_err() {
        return ExitCode::from(1);
    }
    println!("wrote {} records to {}", records.len(), plan.out.display());
    ExitCode::SUCCESS
}

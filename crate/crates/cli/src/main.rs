use std::io::{self, Write};
use std::process::ExitCode;

use alexinv_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; --help and --version are not errors
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let mut out = io::stdout().lock();
    let mut diag = io::stderr();
    let result = run(cli, &mut out, &mut diag);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let _ = writeln!(diag, "{f}");
            ExitCode::from(f.exit_code())
        }
    }
}

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use folding_cli::{run, Cli, Sinks};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (stdout, stderr) = (io::stdout(), io::stderr());
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    let code = run(cli, &mut Sinks { out: &mut out, err: &mut err });
    let _ = out.flush();
    ExitCode::from(code)
}

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use pseudodet_cli::{render, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(out) => {
            let json = render(&out.envelope, cli.global.json_indent);
            let stdout = std::io::stdout();
            let mut stdout = stdout.lock();
            let written = match &out.csv {
                Some(csv) => {
                    // CSV owns stdout so it can be piped; the envelope moves to stderr
                    eprintln!("{json}");
                    stdout.write_all(csv.as_bytes())
                }
                None => writeln!(stdout, "{json}"),
            };
            if let Err(e) = written.and_then(|_| stdout.flush()) {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}

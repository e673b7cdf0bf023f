//! Thin command-line front end: run a script file or a line-oriented REPL
//! over the session layer.
//!
//! Flags: `--script <path>`, `--json`, `--seed <n>`, `--depth <k>`,
//! `--timings`. Exit status is nonzero when any command errored or any
//! check failed.

use std::io::{BufRead, Write};
use std::process::ExitCode;

use hyperline::session::{Options, Session};

fn usage() -> ! {
    eprintln!(
        "usage: hyperline [--script <path>] [--json] [--seed <n>] [--depth <k>] [--timings]"
    );
    std::process::exit(2);
}

fn main() -> ExitCode {
    let mut options = Options::default();
    let mut script: Option<String> = None;
    let mut args = std::env::args().skip(1);
    while let Some(arg) = args.next() {
        match arg.as_str() {
            "--json" => options.json = true,
            "--timings" => options.timings = true,
            "--seed" => match args.next().and_then(|v| v.parse().ok()) {
                Some(v) => options.seed = v,
                None => usage(),
            },
            "--depth" => match args.next().and_then(|v| v.parse().ok()) {
                Some(v) => options.depth = v,
                None => usage(),
            },
            "--script" => match args.next() {
                Some(v) => script = Some(v),
                None => usage(),
            },
            "--help" | "-h" => usage(),
            _ => usage(),
        }
    }

    let json = options.json;
    let mut session = Session::new(options);

    if let Some(path) = script {
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) => {
                eprintln!("cannot read {path}: {e}");
                return ExitCode::from(2);
            }
        };
        let report = session.run_script(&text);
        if json {
            print!("{}", report.to_json_lines());
        } else {
            print!("{}", report.to_plain());
        }
        return if report.failed() {
            ExitCode::FAILURE
        } else {
            ExitCode::SUCCESS
        };
    }

    // REPL: prompt on stderr so stdout stays a clean record stream
    let stdin = std::io::stdin();
    let mut failed = false;
    loop {
        eprint!("dhr> ");
        let _ = std::io::stderr().flush();
        let mut line = String::new();
        match stdin.lock().read_line(&mut line) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => {
                eprintln!("read error: {e}");
                return ExitCode::from(2);
            }
        }
        let record = session.run_line(&line);
        if record.kind == "comment" {
            continue;
        }
        failed |= !record.ok || record.check_failed;
        if session.options.json {
            println!("{}", record.to_json());
        } else {
            let text = record.render_plain();
            if !text.is_empty() {
                println!("{text}");
            }
        }
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

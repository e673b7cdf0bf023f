//! Drive the session layer from code: bind names, run commands, and replay
//! a shipped script with structured output.
//!
//! Run with `cargo run --example scripted_session`.

use hyperline::session::{Options, Session};

fn main() {
    let mut session = Session::new(Options::default());

    println!("--- interactive commands ---");
    for line in [
        "let a = seq{res(0,2) -> 2, res(1,2) -> 0}",
        "let b = a * a - a",
        "force F0 |= b = a * (a - 1)",
        "truthset a = 0",
        "st a @ F0",
        "halo a delta(0) @ F0 + res(1,2)",
        "cont abs(x) @ 0",
    ] {
        let record = session.run_line(line);
        println!("> {line}");
        let text = record.render_plain();
        if !text.is_empty() {
            println!("{text}");
        }
        assert!(record.ok, "command failed");
    }

    println!("\n--- a script, replayed with structured output ---");
    let script = include_str!("../scripts/laugwitz.dhr");
    let mut json_session = Session::new(Options {
        json: true,
        seed: 7,
        ..Options::default()
    });
    let report = json_session.run_script(script);
    print!("{}", report.to_json_lines());
    assert!(!report.failed());

    // same seed, same bytes
    let mut again = Session::new(Options {
        json: true,
        seed: 7,
        ..Options::default()
    });
    assert_eq!(
        report.to_json_lines(),
        again.run_script(script).to_json_lines()
    );
    println!("\nreplay is byte-identical");
}

use std::io::Write;

fn main() {
    let outcome = wstrata_cli::run(std::env::args_os());
    for line in &outcome.diagnostics {
        eprintln!("{line}");
    }
    let mut out = std::io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = out.write_all(outcome.payload.as_bytes());
    let _ = out.flush();
    std::process::exit(outcome.exit_code);
}

use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let result = fps_cli::run(std::env::args_os());
    let mut out = std::io::stdout().lock();
    // a closed pipe downstream is not an error of ours
    let _ = match (&result.report, &result.text) {
        (Some(report), _) => writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(report).expect("JSON values serialize")
        ),
        (None, Some(text)) => write!(out, "{text}"),
        (None, None) => Ok(()),
    };
    if !result.summary.is_empty() {
        eprintln!("{}", result.summary);
    }
    ExitCode::from(result.exit_code as u8)
}

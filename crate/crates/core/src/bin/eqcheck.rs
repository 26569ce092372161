use std::io::Write;

fn main() {
    let (report, code) = eqcheck::cli::dispatch(std::env::args_os());
    let text = report.render();
    let result = if code >= 2 {
        std::io::stderr().write_all(text.as_bytes())
    } else {
        std::io::stdout().write_all(text.as_bytes())
    };
    if result.is_err() {
        std::process::exit(2);
    }
    std::process::exit(code);
}

use detconj::campaign::StandardEvaluator;

fn main() {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = detconj_cli::run(
        std::env::args_os(),
        &StandardEvaluator,
        &mut stdout.lock(),
        &mut stderr.lock(),
    );
    std::process::exit(code);
}

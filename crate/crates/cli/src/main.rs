use std::io;

fn main() {
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    if let Err(f) = cyclehom_cli::configure_threads() {
        use std::io::Write;
        let _ = writeln!(err, "error: {:#}", f.error);
        std::process::exit(f.code);
    }
    let code = cyclehom_cli::run(std::env::args_os(), &mut out, &mut err);
    std::process::exit(code);
}

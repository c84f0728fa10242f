use std::io;

fn main() {
    let code =
        collapse_heating::cli::run_cli(std::env::args_os(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}

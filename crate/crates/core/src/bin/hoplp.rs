use clap::Parser;

fn main() {
    let cli = hoplp::cli::Cli::parse();
    let stdout = std::io::stdout();
    if let Err(e) = hoplp::cli::run(cli, &mut stdout.lock()) {
        eprintln!("error: {e}");
        std::process::exit(hoplp::cli::exit_code(&e));
    }
}

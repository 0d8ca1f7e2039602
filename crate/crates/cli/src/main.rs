use clap::Parser;

fn main() {
    let cli = antedge_cli::Cli::parse();
    if let Err(err) = antedge_cli::execute(&cli) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}

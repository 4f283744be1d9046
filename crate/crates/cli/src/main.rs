use clap::Parser;

fn main() {
    let cli = heunfac_cli::Cli::parse();
    std::process::exit(heunfac_cli::run(cli));
}

use clap::Parser;

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = perscwi_cli::Cli::parse();
    if let Err(e) = perscwi_cli::run(cli) {
        eprintln!("error: {}", perscwi_cli::error_line(&e));
        std::process::exit(1);
    }
}

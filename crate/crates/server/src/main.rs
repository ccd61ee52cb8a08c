use std::sync::Arc;

use clap::Parser;
use life_server::cli::{self, Cli, Command};
use life_server::Service;
use tracing_subscriber::EnvFilter;

fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("info")))
        .with_writer(std::io::stderr)
        .init();
    let args = Cli::parse();
    let config = cli::load_config(&args)?;
    match args.command {
        Command::Serve => {
            let store = cli::open_store(&config, false)?;
            let service = Arc::new(Service::new(store, config));
            tokio::runtime::Runtime::new()?.block_on(cli::serve(service))
        }
        command => {
            let store = cli::open_store(&config, true)?;
            let service = Service::new(store, config);
            cli::run_offline(&service, command, &mut std::io::stdin().lock(), &mut std::io::stdout().lock())
        }
    }
}

fn main() -> std::process::ExitCode {
    graphbandit::cli::main()
}

fn main() -> std::process::ExitCode {
    hyperharm::cli::main()
}

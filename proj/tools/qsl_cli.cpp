#include "qsl/cli_commands.hpp"

int main(int argc, char** argv) { return qsl::run_cli(argc, argv); }

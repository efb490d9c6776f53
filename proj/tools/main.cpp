#include "cli_app.hpp"

int main(int argc, char** argv) { return vlcsim::run_cli(argc, argv); }

#include "cli_app.hpp"

int main(int argc, char** argv) { return kltwist::cli::run(argc, argv); }

// SPDX-License-Identifier: Apache-2.0
#include "frontlab/cli.hpp"

int main(int argc, char** argv) { return frontlab::run_cli(argc, argv); }

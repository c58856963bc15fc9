// Stand-in for an interactive-fiction interpreter. Plays back a transcript:
// blocks separated by "%%" lines, the first printed at start-up and one more
// per command read from stdin, each followed by the prompt.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fake interpreter"};
  std::string transcript;
  std::string prompt = ">";
  int delay_ms = 0;
  int split_ms = 0;
  int hang_after = -1;
  int crash_after = -1;
  bool fail_start = false;
  app.add_option("transcript", transcript)->required();
  app.add_option("--prompt", prompt);
  app.add_option("--delay-ms", delay_ms, "pause before each response");
  app.add_option("--split-ms", split_ms, "pause between the text and the prompt");
  app.add_option("--hang-after", hang_after, "stop printing prompts after this many commands");
  app.add_option("--crash-after", crash_after, "exit after this many commands");
  app.add_flag("--fail-start", fail_start, "print a diagnostic and exit immediately");
  CLI11_PARSE(app, argc, argv);

  if (fail_start) {
    std::cerr << "fatal: story file could not be opened\n";
    return 2;
  }

  std::ifstream in(transcript);
  if (!in) {
    std::cerr << "cannot open " << transcript << "\n";
    return 1;
  }
  std::vector<std::string> blocks(1);
  std::string line;
  while (std::getline(in, line)) {
    if (line == "%%") {
      blocks.emplace_back();
      continue;
    }
    blocks.back() += line + "\n";
  }

  auto emit = [&](const std::string& text, bool with_prompt) {
    std::cout << text << std::flush;
    if (!with_prompt) return;
    if (split_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(split_ms));
    std::cout << "\n" << prompt << " " << std::flush;
  };

  emit(blocks[0], true);
  std::size_t next = 1;
  int commands = 0;
  while (std::getline(std::cin, line)) {
    ++commands;
    if (crash_after >= 0 && commands > crash_after) return 3;
    if (delay_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(delay_ms));
    if (next >= blocks.size()) return 0;
    emit(blocks[next++], hang_after < 0 || commands <= hang_after);
  }
  return 0;
}

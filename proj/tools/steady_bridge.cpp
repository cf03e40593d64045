// steady-bridge: serve the guidance protocol on stdio or a loopback port.

#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "steady/bridge.hpp"

namespace {
std::atomic<bool> g_stop{false};
void on_signal(int) { g_stop = true; }
}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guidance controller bridge (JSON lines)"};
  int port = -1;
  app.add_option("--listen", port, "serve on 127.0.0.1:PORT instead of stdio (0 picks a port)")
      ->check(CLI::Range(0, 65535));
  CLI11_PARSE(app, argc, argv);

  try {
    if (port < 0) {
      std::ios::sync_with_stdio(false);
      steady::bridge::serve(std::cin, std::cout);
      return 0;
    }
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    steady::bridge::ListenOptions opts;
    opts.port = static_cast<std::uint16_t>(port);
    opts.stop = &g_stop;
    opts.on_listening = [](std::uint16_t p) { std::cerr << "listening on 127.0.0.1:" << p << std::endl; };
    steady::bridge::serve_tcp(opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

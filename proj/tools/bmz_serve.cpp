#include <CLI11.hpp>

#include <iostream>

#include "bmz/parallel.hpp"
#include "bmz/service.hpp"

int main(int argc, char** argv) {
    CLI::App app{"HTTP service for the BMZ degree toolkit"};
    std::string host = "127.0.0.1";
    int port = 8787;
    int threads = 0;
    std::uint64_t census_budget = 20000;
    app.add_option("--host", host);
    app.add_option("--port", port);
    app.add_option("--threads", threads, "per-request worker budget");
    app.add_option("--census-budget", census_budget,
                   "max (r!)^(d+1) for interactive census requests");
    CLI11_PARSE(app, argc, argv);

    bmz::service::ServeConfig config;
    config.threads = bmz::resolve_threads(threads);
    config.census_budget = census_budget;

    httplib::Server server;
    bmz::service::register_routes(server, config);

    std::cout << "listening on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
        std::cerr << "failed to bind " << host << ":" << port << "\n";
        return 1;
    }
    return 0;
}

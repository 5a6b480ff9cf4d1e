#pragma once

#include <memory>
#include <string>

namespace pandasim {

/// Static file server for the explorer: files under `root`, plus the bundle at
/// /bundle.json when a bundle path is given.
class StaticServer {
public:
    StaticServer(std::string root, std::string bundle_path);
    ~StaticServer();
    StaticServer(const StaticServer&) = delete;
    StaticServer& operator=(const StaticServer&) = delete;

    /// Port 0 picks a free port. Returns the bound port; throws IoError.
    int bind(const std::string& host, int port);
    /// Blocks until stop() is called from another thread.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace pandasim

#include "pandasim/serve.hpp"

#include <filesystem>

#include <httplib.h>

#include "pandasim/error.hpp"
#include "pandasim/sweep_io.hpp"

namespace pandasim {

struct StaticServer::Impl {
    httplib::Server server;
    std::string root;
    std::string bundle_path;
};

StaticServer::StaticServer(std::string root, std::string bundle_path) : impl_(std::make_unique<Impl>()) {
    impl_->root = std::move(root);
    impl_->bundle_path = std::move(bundle_path);
    if (!impl_->root.empty()) {
        if (!std::filesystem::is_directory(impl_->root))
            throw IoError("serve: '" + impl_->root + "' is not a directory");
        impl_->server.set_mount_point("/", impl_->root);
    }
    if (!impl_->bundle_path.empty()) {
        if (!std::filesystem::is_regular_file(impl_->bundle_path))
            throw IoError("serve: bundle '" + impl_->bundle_path + "' not found");
        const std::string path = impl_->bundle_path;
        impl_->server.Get("/bundle.json", [path](const httplib::Request&, httplib::Response& res) {
            try {
                res.set_content(read_file(path), "application/json");
            } catch (const IoError& e) {
                res.status = 404;
                res.set_content(e.what(), "text/plain");
            }
        });
    }
}

StaticServer::~StaticServer() { stop(); }

int StaticServer::bind(const std::string& host, int port) {
    const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw IoError("serve: cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void StaticServer::listen() { impl_->server.listen_after_bind(); }

void StaticServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace pandasim

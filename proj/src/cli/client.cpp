#include "smellhunter/cli/client.hpp"

#include <httplib.h>

namespace smellhunter::cli {

namespace {

httplib::Client make_client(const std::string& url) {
    httplib::Client c(url);
    c.set_connection_timeout(5);
    c.set_read_timeout(30);
    return c;
}

std::string describe(httplib::Error e) { return "request failed: " + httplib::to_string(e); }

}  // namespace

GatewayClient::GatewayClient(std::string server_url) : url_(std::move(server_url)) {
    while (!url_.empty() && url_.back() == '/') url_.pop_back();
}

Expected<HttpReply, std::string> GatewayClient::post_analysis(const std::map<std::string, std::string>& parts) const {
    httplib::MultipartFormDataItems items;
    for (const auto& [name, content] : parts) items.push_back({name, content, name, "application/octet-stream"});
    auto c = make_client(url_);
    if (!c.is_valid()) return unexpected("invalid server url '" + url_ + "'");
    auto res = c.Post("/analyses", items);
    if (!res) return unexpected(describe(res.error()));
    return HttpReply{res->status, res->body};
}

Expected<HttpReply, std::string> GatewayClient::get(const std::string& path,
                                                    const std::multimap<std::string, std::string>& params) const {
    auto c = make_client(url_);
    if (!c.is_valid()) return unexpected("invalid server url '" + url_ + "'");
    httplib::Params p(params.begin(), params.end());
    auto res = c.Get(path, p, httplib::Headers{});
    if (!res) return unexpected(describe(res.error()));
    return HttpReply{res->status, res->body};
}

}  // namespace smellhunter::cli

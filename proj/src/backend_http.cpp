// Copyright 2026 The locmt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <httplib.h>

#include <chrono>
#include <cmath>

#include "locmt/backend.hpp"
#include "locmt/error.hpp"

namespace locmt::backend {

namespace {

class HttpTransport : public Transport {
 public:
  HttpTransport(const std::string& base_url, double timeout_s) : timeout_s_(timeout_s) {
    const auto scheme_end = base_url.find("://");
    const auto path_start = base_url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) {
      host_ = base_url;
    } else {
      host_ = base_url.substr(0, path_start);
      prefix_ = base_url.substr(path_start);
      while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
    }
  }

  WireResponse post(const std::string& path, const Json& body) override {
    return exchange(path, [&](httplib::Client& cli, const std::string& full) {
      return cli.Post(full, body.dump(), "application/json; charset=utf-8");
    });
  }

  WireResponse get(const std::string& path) override {
    return exchange(path, [&](httplib::Client& cli, const std::string& full) { return cli.Get(full); });
  }

 private:
  template <typename F>
  WireResponse exchange(const std::string& path, F&& call) {
    // httplib::Client is not meant to be shared across threads; one per exchange.
    httplib::Client cli(host_);
    const auto secs = static_cast<time_t>(timeout_s_);
    const auto usecs = static_cast<time_t>((timeout_s_ - std::floor(timeout_s_)) * 1e6);
    cli.set_connection_timeout(secs, usecs);
    cli.set_read_timeout(secs, usecs);
    cli.set_write_timeout(secs, usecs);
    const auto started = std::chrono::steady_clock::now();
    auto res = call(cli, prefix_ + path);
    if (!res) {
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      const auto err = res.error();
      const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                             ((err == httplib::Error::Read || err == httplib::Error::Write) && elapsed >= 0.9 * timeout_s_);
      throw BackendError(timed_out ? BackendErrorKind::timeout : BackendErrorKind::transport,
                         host_ + prefix_ + path + ": " + httplib::to_string(err));
    }
    WireResponse out;
    out.status = res->status;
    out.body = Json::parse(res->body, nullptr, false);
    if (out.body.is_discarded()) {
      if (out.status >= 200 && out.status < 300) {
        throw BackendError(BackendErrorKind::bad_response, host_ + prefix_ + path + ": body is not JSON");
      }
      out.body = Json::object();
    }
    return out;
  }

  std::string host_;
  std::string prefix_;
  double timeout_s_;
};

}  // namespace

std::shared_ptr<Transport> make_http_transport(const std::string& base_url, double timeout_s) {
  return std::make_shared<HttpTransport>(base_url, timeout_s);
}

}  // namespace locmt::backend

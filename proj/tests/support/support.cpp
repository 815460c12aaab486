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

#include "support.hpp"

#include <httplib.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>
#include <unicode/uchar.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include "locmt/unicode.hpp"

namespace locmt::testing {

fs::path fixture_dir() { return LOCMT_FIXTURE_DIR; }

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "locmt-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// ---------------------------------------------------------------------------

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

const std::vector<std::string>& sample_emoji() {
  static const std::vector<std::string> e = {
      "😀", "😂", "😍", "😡", "💔", "👍", "✨", "☺", "🙏",
      "❤️",                              // VS16
      "👍🏽", "👏🏻",                      // skin tone
      "👨‍👩‍👧", "🤦🏻‍♀️", "🏳️‍🌈",           // ZWJ sequences
      "🇱🇧", "🇫🇷",                      // flags
      "1️⃣",                               // keycap
      "🏴󠁧󠁢󠁳󠁣󠁴󠁿",                      // tag sequence
  };
  return e;
}

namespace {

const std::vector<std::string> kLatin = {"Bonjour", "ÉCOLE", "déjà", "vida", "C'est", "naïve", "STRASSE", "hoy", "la", "de",
                                         "lol", "LOL", "Paris", "John", "don’t", "Ça", "e\xCC\x81t\xC3\xA9", "ŒUVRE", "İstanbul",
                                         "ǅemal", "ß", "ﬁn", "ΣΟΦΙΑ", "Ωμέγα"};
const std::vector<std::string> kArabic = {"مُحَمَّد", "أحمد", "إسلام", "آباد", "كِتاب", "مؤسسة", "سائل", "الخير", "ٱلله",
                                          "قُرْآن", "جميلـــة", "بريطانيا", "لِلأسف", "مَرْحَبًا", "ءامن", "هٰذا", "ﷺ", "۝"};
const std::vector<std::string> kNumbers = {"123", "٣٤٥", "۱۲", "3.14", "²", "½", "Ⅻ"};
const std::vector<std::string> kPunct = {"!!!", "?", "،", "؟", "...", "(", ")", "«", "»", "-", "'", "’", "\"", "$", "%",
                                         "+", "=", "*", "_", "~", "|", "/", "\\", "&", ";", ":", "#", "@", "<", ">"};
const std::vector<std::string> kUrls = {"https://t.co/Ab12", "http://x.y/z?q=1", "www.example.com", "HTTPS://EXAMPLE.COM/ok",
                                        "see:https://a.b", "wwwhat"};
const std::vector<std::string> kMentions = {"@user_1", "@مستخدم", "@Marie", "a@b.c", "@@x"};
const std::vector<std::string> kHashtags = {"#SunsetBeach", "#غروب_الشمس", "#2024", "#LundiMatin", "#a_b_c", "#HTMLParser"};
const std::vector<std::string> kEntities = {"&amp;", "&lt;3", "&#x1F600;", "&#1605;", "&bogus;", "&#0;", "&#xD800;", "&nbsp;",
                                            "&amp;amp;", "&quot;", "&#39;", "&#x200B;"};
// ZWSP, LRM, ZWJ, BOM, replacement char, NBSP, tab, newline, double space, em space, ideographic space
const std::vector<std::string> kInvisible = {"\u200B", "\u200E", "\u200D", "\uFEFF", "\uFFFD", "\u00A0",
                                             "\t", "\n", "  ", "\u2003", "\u3000"};
const std::vector<std::string> kEmoticons = {":-)", ":D", "<3", "xD", ":(", "^_^"};
const std::vector<std::string> kSeparators = {" ", " ", " ", "", "  ", "\t"};

}  // namespace

std::string random_mixed_text(Rng& rng, std::size_t max_pieces) {
  const std::size_t n = uniform(rng, 0, max_pieces);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t cls = uniform(rng, 0, 11);
    switch (cls) {
      case 0: case 1: out += pick(rng, kLatin); break;
      case 2: case 3: out += pick(rng, kArabic); break;
      case 4: out += pick(rng, kNumbers); break;
      case 5: out += pick(rng, kPunct); break;
      case 6: out += pick(rng, kUrls); break;
      case 7: out += pick(rng, kMentions); break;
      case 8: out += pick(rng, kHashtags); break;
      case 9: out += pick(rng, kEntities); break;
      case 10: out += pick(rng, kInvisible); break;
      default: out += coin(rng) ? pick(rng, sample_emoji()) : pick(rng, kEmoticons); break;
    }
    out += pick(rng, kSeparators);
  }
  return out;
}

std::string random_plain_text(Rng& rng, std::size_t max_words) {
  static const std::vector<std::string> words = {"bonjour", "ami", "vida", "hoy", "جميل", "الخير", "صباح", "match", "soir", "fete"};
  const std::size_t n = uniform(rng, 1, max_words);
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += (i ? " " : "") + pick(rng, words);
  return out;
}

std::vector<std::vector<std::string>> random_token_corpus(Rng& rng, std::size_t pairs, std::size_t vocab, std::size_t max_len) {
  std::vector<std::vector<std::string>> out(pairs);
  for (auto& toks : out) {
    const std::size_t len = uniform(rng, 0, max_len);
    for (std::size_t i = 0; i < len; ++i) toks.push_back("t" + std::to_string(uniform(rng, 0, vocab - 1)));
  }
  return out;
}

corpus::Corpus labeled_corpus(const std::string& name, corpus::Task task,
                              const std::vector<std::pair<corpus::Label, std::size_t>>& counts, const std::string& lang,
                              std::uint64_t seed) {
  Rng rng(seed);
  std::vector<corpus::Label> labels;
  for (const auto& [label, n] : counts) labels.insert(labels.end(), n, label);
  std::shuffle(labels.begin(), labels.end(), rng);
  std::vector<corpus::LabeledExample> ex;
  ex.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "%s-%06zu", name.c_str(), i + 1);
    ex.push_back({{id, random_plain_text(rng), corpus::LangTag::parse(lang), std::nullopt}, task, labels[i]});
  }
  return corpus::make_labeled(name, std::move(ex));
}

// ---------------------------------------------------------------------------

namespace {

using Gram = std::vector<std::string>;

std::vector<Gram> grams_of(const std::vector<std::string>& toks, std::size_t n) {
  std::vector<Gram> out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) out.emplace_back(toks.begin() + i, toks.begin() + i + n);
  return out;
}

// Greedy one-to-one matching; equals the clipped count min(count_h, count_r) summed over n-grams.
long long matched(const std::vector<Gram>& h, const std::vector<Gram>& r) {
  std::vector<bool> used(r.size(), false);
  long long m = 0;
  for (const auto& g : h) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (!used[j] && r[j] == g) {
        used[j] = true;
        ++m;
        break;
      }
    }
  }
  return m;
}

}  // namespace

double oracle_bleu(const std::vector<std::vector<std::string>>& hyps, const std::vector<std::vector<std::string>>& refs) {
  long long c = 0, r = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    c += static_cast<long long>(hyps[i].size());
    r += static_cast<long long>(refs[i].size());
  }
  if (c == 0) return 0.0;
  double log_sum = 0.0;
  int used = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    long long m = 0, t = 0;
    for (std::size_t i = 0; i < hyps.size(); ++i) {
      const auto h = grams_of(hyps[i], n);
      t += static_cast<long long>(h.size());
      m += matched(h, grams_of(refs[i], n));
    }
    if (t == 0) continue;
    log_sum += std::log((m > 0 ? static_cast<double>(m) : 0.1) / static_cast<double>(t));
    ++used;
  }
  const double bp = c < r ? std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c)) : 1.0;
  return 100.0 * bp * std::exp(log_sum / used);
}

double oracle_rouge1(const std::vector<std::vector<std::string>>& hyps, const std::vector<std::vector<std::string>>& refs) {
  long long m = 0, total = 0;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    m += matched(grams_of(hyps[i], 1), grams_of(refs[i], 1));
    total += static_cast<long long>(refs[i].size());
  }
  return total ? 100.0 * static_cast<double>(m) / static_cast<double>(total) : 0.0;
}

EarlyStopOutcome simulate_early_stop(const std::vector<double>& values, int patience, double min_delta) {
  EarlyStopOutcome out;
  double best = 0;
  int since_best = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i == 0 || values[i] - best > min_delta) {
      best = values[i];
      out.best_index = static_cast<int>(i) + 1;
      since_best = 0;
    } else {
      ++since_best;
      if (since_best == patience) {
        out.stop_at = static_cast<int>(i) + 1;
        return out;
      }
    }
  }
  return out;
}

std::map<std::string, std::vector<std::pair<std::string, std::int64_t>>> oracle_word_counts(
    const std::vector<std::string>& texts, const std::vector<std::string>& labels, std::size_t k) {
  std::map<std::string, std::map<std::string, std::int64_t>> counts;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    std::string word;
    auto flush = [&] {
      if (!word.empty()) ++counts[labels[i]][word];
      word.clear();
    };
    for (char ch : texts[i]) {
      if (ch == ' ') flush();
      else word += ch;
    }
    flush();
  }
  std::map<std::string, std::vector<std::pair<std::string, std::int64_t>>> out;
  for (auto& [label, table] : counts) {
    // Repeatedly take the largest count; std::map order makes the smallest token win ties.
    auto remaining = table;
    auto& list = out[label];
    while (!remaining.empty() && list.size() < k) {
      auto best = remaining.begin();
      for (auto it = remaining.begin(); it != remaining.end(); ++it) {
        if (it->second > best->second) best = it;
      }
      list.push_back(*best);
      remaining.erase(best);
    }
  }
  return out;
}

std::vector<char32_t> emoji_multiset(const std::string& text) {
  std::vector<char32_t> out;
  for (char32_t c : unicode::decode(text)) {
    const auto cp = static_cast<UChar32>(c);
    if (u_hasBinaryProperty(cp, UCHAR_EXTENDED_PICTOGRAPHIC) || u_hasBinaryProperty(cp, UCHAR_EMOJI_MODIFIER) ||
        (c >= 0x1F1E6 && c <= 0x1F1FF) || c == 0xFE0F || c == 0x200D || c == 0x20E3 || (c >= 0xE0020 && c <= 0xE007F)) {
      out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------

template <class F>
backend::WireResponse CountingTransport::counted(F&& f) {
  ++calls_;
  const int now = ++current_;
  int prev = peak_.load();
  while (now > prev && !peak_.compare_exchange_weak(prev, now)) {
  }
  std::this_thread::sleep_for(hold_);
  struct Leave {
    std::atomic<int>& c;
    ~Leave() { --c; }
  } leave{current_};
  return f();
}

backend::WireResponse CountingTransport::post(const std::string& path, const backend::Json& body) {
  return counted([&] { return inner_->post(path, body); });
}

backend::WireResponse CountingTransport::get(const std::string& path) {
  return counted([&] { return inner_->get(path); });
}

void ScriptedTransport::push(Step step) {
  std::lock_guard lock(mutex_);
  script_.push_back(std::move(step));
}

backend::WireResponse ScriptedTransport::post(const std::string& path, const backend::Json& body) {
  ++calls_;
  Step step;
  {
    std::lock_guard lock(mutex_);
    if (!script_.empty()) {
      step = std::move(script_.front());
      script_.erase(script_.begin());
    }
  }
  if (step) return step(path, &body);
  return inner_->post(path, body);
}

backend::WireResponse ScriptedTransport::get(const std::string& path) {
  ++calls_;
  Step step;
  {
    std::lock_guard lock(mutex_);
    if (!script_.empty()) {
      step = std::move(script_.front());
      script_.erase(script_.begin());
    }
  }
  if (step) return step(path, nullptr);
  return inner_->get(path);
}

// ---------------------------------------------------------------------------

struct FakeHttpServer::Impl {
  httplib::Server server;
  std::thread thread;
  int port = 0;
  std::shared_ptr<backend::Transport> handler;
  mutable std::mutex mutex;
  std::vector<std::string> paths;
};

FakeHttpServer::FakeHttpServer(std::shared_ptr<backend::Transport> handler) : impl_(new Impl) {
  impl_->handler = std::move(handler);
  auto serve = [this](const httplib::Request& req, httplib::Response& res) {
    ++requests_;
    {
      std::lock_guard lock(impl_->mutex);
      impl_->paths.push_back(req.method + " " + req.path);
    }
    if (const int d = delay_ms_.load()) std::this_thread::sleep_for(std::chrono::milliseconds(d));
    if (fail_count_.fetch_sub(1) > 0) {
      res.status = fail_status_.load();
      res.set_content(backend::error_body(static_cast<BackendErrorKind>(fail_kind_.load()), "injected").dump(), "application/json");
      return;
    }
    if (garble_.fetch_sub(1) > 0) {
      res.status = 200;
      res.set_content("<html>not json</html>", "text/html");
      return;
    }
    backend::WireResponse out;
    if (req.method == "POST") {
      const auto body = backend::Json::parse(req.body, nullptr, false);
      if (body.is_discarded()) {
        res.status = 400;
        res.set_content(backend::error_body(BackendErrorKind::bad_request, "body is not JSON").dump(), "application/json");
        return;
      }
      out = impl_->handler->post(req.path, body);
    } else {
      out = impl_->handler->get(req.path);
    }
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json; charset=utf-8");
  };
  impl_->server.Post(R"(.*/v1/.*)", serve);
  impl_->server.Get(R"(.*/v1/.*)", serve);
  impl_->port = impl_->server.bind_to_any_port("127.0.0.1");
  if (impl_->port <= 0) throw std::runtime_error("cannot bind fake server");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

FakeHttpServer::~FakeHttpServer() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string FakeHttpServer::url() const { return "http://127.0.0.1:" + std::to_string(impl_->port); }

void FakeHttpServer::fail_next(int n, int status, BackendErrorKind kind) {
  fail_status_ = status;
  fail_kind_ = static_cast<int>(kind);
  fail_count_ = n;
}

std::vector<std::string> FakeHttpServer::paths() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->paths;
}

std::string unreachable_url() {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  socklen_t len = sizeof addr;
  ::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  const int port = ntohs(addr.sin_port);
  ::close(fd);
  return "http://127.0.0.1:" + std::to_string(port);
}

}  // namespace locmt::testing

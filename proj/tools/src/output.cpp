#include "output.hpp"

#include <ctime>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "sptnoise/errors.hpp"
#include "sptnoise/io.hpp"

#ifndef SPTNOISE_VERSION
#define SPTNOISE_VERSION "unknown"
#endif

namespace fs = std::filesystem;

namespace sptnoise::cli {

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

namespace {

std::string utc_iso(std::chrono::system_clock::time_point t) {
  std::time_t tt = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

nlohmann::json make_manifest(const RunContext& ctx, const std::vector<Artifact>& artifacts) {
  nlohmann::json m;
  m["tool"] = "sptnoise";
  m["version"] = SPTNOISE_VERSION;
  m["command"] = ctx.command;
  m["preset"] = ctx.preset ? nlohmann::json(*ctx.preset) : nlohmann::json(nullptr);
  m["params"] = ctx.params;
  m["seed"] = ctx.seed;
  m["tol"] = ctx.tol ? nlohmann::json(*ctx.tol) : nlohmann::json(nullptr);
  m["started_utc"] = utc_iso(ctx.started);
  m["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::system_clock::now() - ctx.started).count();
  auto& outs = m["outputs"] = nlohmann::json::array();
  for (const auto& a : artifacts)
    outs.push_back({{"file", a.name}, {"bytes", a.content.size()}, {"sha256", sha256_hex(a.content)}});
  return m;
}

void emit(const RunContext& ctx, const std::vector<Artifact>& artifacts, std::ostream& out) {
  if (!ctx.out_dir) {
    for (const auto& a : artifacts) {
      if (artifacts.size() > 1) out << "# " << a.name << "\n";
      out << a.content;
      if (!a.content.empty() && a.content.back() != '\n') out << "\n";
    }
    return;
  }
  const fs::path dir(*ctx.out_dir);
  std::vector<fs::path> targets;
  for (const auto& a : artifacts) targets.push_back(dir / a.name);
  targets.push_back(dir / "manifest.json");
  if (!ctx.force)
    for (const auto& t : targets)
      if (fs::exists(t)) throw ValidationError("output file " + t.string() + " already exists (use --force)");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ValidationError("cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto& a : artifacts) write_file_atomic((dir / a.name).string(), a.content, ctx.force);
  write_file_atomic(targets.back().string(), make_manifest(ctx, artifacts).dump(2) + "\n", ctx.force);
  for (const auto& t : targets) out << t.string() << "\n";
}

}  // namespace sptnoise::cli

// mediacert: endorse media files with XMP sidecar signatures and verify them.

#include <unistd.h>

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "mediacert/chunked.hpp"
#include "mediacert/demo.hpp"
#include "mediacert/error.hpp"
#include "mediacert/file_io.hpp"
#include "mediacert/html.hpp"
#include "mediacert/metadata_input.hpp"
#include "mediacert/report_json.hpp"
#include "mediacert/sidecar.hpp"
#include "mediacert/signer.hpp"
#include "mediacert/verifier.hpp"

namespace fs = std::filesystem;
using namespace mediacert;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct MetadataFlags {
  std::array<std::string, EndorsementMetadata::kFieldCount> values;
  std::array<CLI::Option*, EndorsementMetadata::kFieldCount> options{};

  void attach(CLI::App* app) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      options[i] = app->add_option("--" + std::string(kMetadataFields[i].flag), values[i],
                                   std::string(kMetadataFields[i].prompt_label) + " (env " +
                                       std::string(kMetadataFields[i].env) + ")");
    }
  }

  PartialMetadata partial() const {
    PartialMetadata out;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (options[i]->count() > 0) out[i] = values[i];
    }
    return out;
  }
};

PartialMetadata from_env() {
  PartialMetadata out;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = process_env(kMetadataFields[i].env);
  return out;
}

std::optional<std::size_t> chunk_option(CLI::Option* opt, std::size_t value) {
  if (opt->count() == 0) return std::nullopt;
  return value;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Endorse multimedia files with detached XMP sidecar signatures and verify them"};
  app.require_subcommand(1);

  // sign
  auto* sign = app.add_subcommand("sign", "Sign one asset and write <asset>.xmp");
  std::string sign_asset_path, key_path, cert_path, out_path;
  std::size_t chunk_size = kDefaultChunkSize;
  bool force_prompt = false;
  MetadataFlags sign_meta;
  sign->add_option("asset", sign_asset_path, "Media file to endorse")->required();
  sign_meta.attach(sign);
  sign->add_option("--key", key_path, "Endorser private key (PEM)")->required();
  sign->add_option("--cert", cert_path, "Endorser certificate (PEM, chain allowed)")->required();
  sign->add_option("--out", out_path, "Sidecar path (default <asset>.xmp)");
  auto* sign_chunk_opt = sign->add_option("--chunk-size", chunk_size, "Chunk-sign with this chunk size in bytes");
  sign->add_flag("--prompt", force_prompt, "Prompt for missing metadata even without a terminal");

  // annotate
  auto* annotate = app.add_subcommand("annotate", "Add x-media-cert attributes to an HTML page");
  std::string page_path, annotate_out;
  std::vector<std::string> maps;
  bool auto_map = false, in_place = false;
  annotate->add_option("page", page_path, "HTML file")->required();
  annotate->add_option("--map", maps, "asset=sidecar mapping (repeatable)");
  annotate->add_flag("--auto", auto_map, "Map every local img/video src that has a <src>.xmp next to it");
  annotate->add_option("--out", annotate_out, "Output file (default stdout)");
  annotate->add_flag("--in-place", in_place, "Rewrite the page file");

  // batch
  auto* batch = app.add_subcommand("batch", "Sign every media file in a directory");
  BatchRequest batch_req;
  std::string batch_dir, batch_key, batch_cert;
  std::size_t batch_chunk = kDefaultChunkSize;
  MetadataFlags batch_meta;
  batch->add_option("dir", batch_dir, "Directory of media files")->required();
  batch_meta.attach(batch);
  batch->add_option("--key", batch_key, "Endorser private key (PEM)")->required();
  batch->add_option("--cert", batch_cert, "Endorser certificate (PEM)")->required();
  batch->add_flag("--force", batch_req.force, "Re-sign files whose sidecar is still valid");
  batch->add_option("--jobs", batch_req.jobs, "Parallel signers")->check(CLI::PositiveNumber);
  auto* batch_chunk_opt = batch->add_option("--chunk-size", batch_chunk, "Chunk-sign with this chunk size");

  // keygen
  auto* keygen = app.add_subcommand("keygen", "Create a demo root CA and endorser key/certificate");
  std::string keygen_name, keygen_dir = ".";
  int valid_days = 365, backdate_days = 0;
  keygen->add_option("--name", keygen_name, "Endorsing organization")->required();
  keygen->add_option("--out-dir", keygen_dir, "Output directory");
  keygen->add_option("--valid-days", valid_days, "Endorser certificate lifetime in days");
  keygen->add_option("--backdate-days", backdate_days, "Start the endorser validity this many days ago");

  // verify
  auto* verify = app.add_subcommand("verify", "Verify one asset against its sidecar");
  std::string verify_asset, verify_sidecar, trust_dir;
  bool json = false, strict = false;
  verify->add_option("asset", verify_asset, "Media file")->required();
  verify->add_option("--sidecar", verify_sidecar, "Sidecar path (default <asset>.xmp)");
  verify->add_option("--trust", trust_dir, "Directory of trusted root PEM files")->required();
  verify->add_flag("--json", json, "Emit a JSON report");
  verify->add_flag("--strict", strict, "Treat expired certificates as untrusted");

  // verify-stream
  auto* vstream = app.add_subcommand("verify-stream", "Verify a chunk-signed asset incrementally");
  std::string stream_asset, stream_sidecar, stream_trust;
  vstream->add_option("asset", stream_asset, "Media file, or - for stdin")->required();
  vstream->add_option("--sidecar", stream_sidecar, "Chunk manifest sidecar (default <asset>.xmp)");
  vstream->add_option("--trust", stream_trust, "Directory of trusted root PEM files")->required();
  vstream->add_flag("--json", json, "Emit one JSON object per chunk");
  vstream->add_flag("--strict", strict, "Treat expired certificates as untrusted");

  // crawl
  auto* crawl = app.add_subcommand("crawl", "Verify every annotated media element on a page");
  std::string crawl_page_loc, crawl_trust, ca_file;
  std::size_t concurrency = 4;
  bool insecure = false;
  crawl->add_option("page", crawl_page_loc, "Page URL or local HTML path")->required();
  crawl->add_option("--trust", crawl_trust, "Directory of trusted root PEM files")->required();
  crawl->add_flag("--json", json, "Emit a JSON report");
  crawl->add_option("--concurrency", concurrency, "Parallel asset fetches")->check(CLI::PositiveNumber);
  crawl->add_flag("--strict", strict, "Treat expired certificates as untrusted");
  crawl->add_option("--ca-file", ca_file, "Extra CA bundle for HTTPS pages");
  crawl->add_flag("--insecure", insecure, "Skip HTTPS server certificate checks");

  // demo-site
  auto* demo_site = app.add_subcommand("demo-site", "Generate the demo site fixture");
  std::string demo_dir;
  demo_site->add_option("dir", demo_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  const ExpiryPolicy policy = strict ? ExpiryPolicy::Strict : ExpiryPolicy::WarnOnExpiry;

  try {
    if (*sign) {
      const PartialMetadata partial = merge_partial(sign_meta.partial(), from_env());
      const bool interactive = force_prompt || isatty(STDIN_FILENO) == 1;
      PromptIo io{std::cin, std::cerr};
      SignRequest req;
      req.asset_path = sign_asset_path;
      req.metadata = resolve_metadata(partial, nullptr, interactive ? &io : nullptr);
      req.key_path = key_path;
      req.cert_chain_path = cert_path;
      if (!out_path.empty()) req.output_path = out_path;
      req.chunk_size = chunk_option(sign_chunk_opt, chunk_size);
      std::cout << sign_asset(req).string() << "\n";
      return kExitOk;
    }

    if (*annotate) {
      std::map<std::string, std::string> mapping;
      const Bytes page = read_file(page_path);
      if (auto_map) {
        for (const MediaElement& el : find_media_elements(as_chars(page))) {
          if (el.src.empty() || el.src.find("://") != std::string::npos) continue;
          const fs::path local = fs::path(page_path).parent_path() / el.src;
          if (fs::exists(sidecar_path_for(local))) mapping[el.src] = el.src + ".xmp";
        }
      }
      for (const auto& m : maps) {
        const auto eq = m.find('=');
        if (eq == std::string::npos || eq == 0) {
          std::cerr << "--map expects asset=sidecar, got '" << m << "'\n";
          return kExitUsage;
        }
        mapping[m.substr(0, eq)] = m.substr(eq + 1);
      }
      const std::string annotated = annotate_html(as_chars(page), mapping);
      if (in_place) {
        write_file_atomic(page_path, annotated);
      } else if (!annotate_out.empty()) {
        write_file_atomic(annotate_out, annotated);
      } else {
        std::cout << annotated;
      }
      return kExitOk;
    }

    if (*batch) {
      batch_req.directory = batch_dir;
      batch_req.shared = merge_partial(batch_meta.partial(), from_env());
      batch_req.key_path = batch_key;
      batch_req.cert_chain_path = batch_cert;
      batch_req.chunk_size = chunk_option(batch_chunk_opt, batch_chunk);
      const BatchSummary summary = batch_sign(batch_req);
      for (const auto& item : summary.items) {
        std::cout << to_string(item.outcome) << "\t" << item.asset.string() << "\t" << item.detail << "\n";
      }
      std::cout << "signed=" << summary.signed_count << " skipped=" << summary.skipped
                << " failed=" << summary.failed << "\n";
      return summary.failed > 0 ? kExitFailure : kExitOk;
    }

    if (*keygen) {
      DemoChainOptions options;
      options.not_before_offset = -std::chrono::hours(24 * backdate_days + 1);
      options.validity = std::chrono::hours(24 * valid_days + 1);
      const DemoChain chain = issue_demo_chain(keygen_name, options);
      const fs::path dir = keygen_dir;
      fs::create_directories(dir);
      write_file_atomic(dir / "root.pem", chain.root.pem());
      write_file_atomic(dir / "endorser.key.pem", chain.endorser_key.to_pem());
      write_file_atomic(dir / "endorser.cert.pem", chain.endorser.pem() + chain.root.pem());
      std::cout << (dir / "root.pem").string() << "\n"
                << (dir / "endorser.key.pem").string() << "\n"
                << (dir / "endorser.cert.pem").string() << "\n";
      return kExitOk;
    }

    if (*verify) {
      const TrustStore trust = TrustStore::from_directory(trust_dir, policy);
      std::optional<fs::path> sidecar;
      if (!verify_sidecar.empty()) sidecar = verify_sidecar;
      const VerificationReport report = verify_file(verify_asset, sidecar, trust);
      std::cout << (json ? to_json(report).dump(2) + "\n" : render_text(report));
      return is_failure(report.status) ? kExitFailure : kExitOk;
    }

    if (*vstream) {
      const TrustStore trust = TrustStore::from_directory(stream_trust, policy);
      fs::path sidecar = stream_sidecar;
      if (sidecar.empty()) {
        if (stream_asset == "-") {
          std::cerr << "--sidecar is required when reading stdin\n";
          return kExitUsage;
        }
        sidecar = sidecar_path_for(stream_asset);
      }
      const SidecarDocument manifest = parse_sidecar(as_chars(read_file(sidecar)));
      if (!manifest.is_chunked()) {
        std::cerr << sidecar.string() << " is not a chunk manifest\n";
        return kExitFailure;
      }
      std::ifstream file;
      std::istream* in = &std::cin;
      if (stream_asset != "-") {
        if (!fs::exists(stream_asset)) throw Error(Errc::FileNotFound, stream_asset);
        file.open(stream_asset, std::ios::binary);
        in = &file;
      }
      bool failed = false;
      auto print = [&](const ChunkVerdict& v) {
        failed = failed || is_failure(v.status);
        if (json) {
          std::cout << to_json(v).dump() << std::endl;
        } else {
          std::cout << "chunk " << v.index << " [" << v.byte_offset << "+" << v.byte_length << "] "
                    << to_string(v.status) << std::endl;
        }
      };
      verify_chunked_stream(*in, manifest, trust, print);
      return failed ? kExitFailure : kExitOk;
    }

    if (*crawl) {
      const TrustStore trust = TrustStore::from_directory(crawl_trust, policy);
      FetchOptions fetch_options;
      if (!ca_file.empty()) fetch_options.ca_file = ca_file;
      fetch_options.verify_tls = !insecure;
      const PageReport report = crawl_page(crawl_page_loc, trust, concurrency, fetch_options);
      std::cout << (json ? to_json(report).dump(2) + "\n" : render_text(report));
      return report.has_failure() ? kExitFailure : kExitOk;
    }

    if (*demo_site) {
      const DemoSite site = build_demo_site(demo_dir);
      std::cout << "site:  " << site.site_root.string() << "\n"
                << "trust: " << site.trust_dir.string() << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == Errc::InvalidArgument ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

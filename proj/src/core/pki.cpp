#include <openssl/pem.h>
#include <openssl/rand.h>
#include <openssl/x509v3.h>

#include <algorithm>
#include <fstream>
#include <iterator>

#include "mediacert/error.hpp"
#include "mediacert/pki.hpp"
#include "openssl_util.hpp"

namespace mediacert {

using detail::BioPtr;
using detail::last_ssl_error;
using detail::memory_bio;
using detail::share;

namespace {

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

bool looks_like_pem(ByteView data) {
  return as_chars(data).find("-----BEGIN") != std::string_view::npos;
}

std::string name_entry(X509* cert, int nid) {
  X509_NAME* name = X509_get_subject_name(cert);
  const int idx = X509_NAME_get_index_by_NID(name, nid, -1);
  if (idx < 0) return {};
  ASN1_STRING* data = X509_NAME_ENTRY_get_data(X509_NAME_get_entry(name, idx));
  unsigned char* utf8 = nullptr;
  const int len = ASN1_STRING_to_UTF8(&utf8, data);
  if (len < 0) return {};
  std::string out(reinterpret_cast<char*>(utf8), static_cast<std::size_t>(len));
  OPENSSL_free(utf8);
  return out;
}

std::string key_pem(EVP_PKEY* key, bool private_part) {
  BioPtr bio(BIO_new(BIO_s_mem()));
  const int ok = private_part
                     ? PEM_write_bio_PrivateKey(bio.get(), key, nullptr, nullptr, 0, nullptr, nullptr)
                     : PEM_write_bio_PUBKEY(bio.get(), key);
  if (ok != 1) throw Error(Errc::InvalidKey, last_ssl_error());
  return detail::drain(bio.get());
}

}  // namespace

PrivateKey unchecked_private_key(ByteView encoded) {
  EVP_PKEY* key = nullptr;
  if (looks_like_pem(encoded)) {
    auto bio = memory_bio(encoded);
    key = PEM_read_bio_PrivateKey(bio.get(), nullptr, nullptr, nullptr);
  } else {
    const unsigned char* p = encoded.data();
    key = d2i_AutoPrivateKey(nullptr, &p, static_cast<long>(encoded.size()));
  }
  if (key == nullptr) throw Error(Errc::InvalidKey, "undecodable private key: " + last_ssl_error());
  return PrivateKey(share(key));
}

PrivateKey PrivateKey::from_bytes(ByteView encoded) {
  PrivateKey key = unchecked_private_key(encoded);
  if (EVP_PKEY_get_base_id(key.get()) != EVP_PKEY_RSA) {
    throw Error(Errc::InvalidKey, "only RSA keys are supported");
  }
  if (key.bits() < kMinRsaBits) {
    throw Error(Errc::InvalidKey, "RSA modulus of " + std::to_string(key.bits()) +
                                      " bits is below the " + std::to_string(kMinRsaBits) +
                                      "-bit minimum");
  }
  return key;
}

PrivateKey PrivateKey::load(const std::filesystem::path& path) {
  return from_bytes(read_file(path));
}

PrivateKey PrivateKey::generate(int bits) {
  EVP_PKEY* key = EVP_RSA_gen(static_cast<unsigned int>(bits));
  if (key == nullptr) throw Error(Errc::InvalidKey, "RSA generation failed: " + last_ssl_error());
  return PrivateKey(share(key));
}

int PrivateKey::bits() const { return EVP_PKEY_get_bits(key_.get()); }
std::string PrivateKey::to_pem() const { return key_pem(key_.get(), true); }
std::string PrivateKey::public_pem() const { return key_pem(key_.get(), false); }

int PublicKey::bits() const { return EVP_PKEY_get_bits(key_.get()); }
std::string PublicKey::to_pem() const { return key_pem(key_.get(), false); }
bool PublicKey::operator==(const PublicKey& other) const {
  return EVP_PKEY_eq(key_.get(), other.key_.get()) == 1;
}

Certificate Certificate::from_der(ByteView der) {
  const unsigned char* p = der.data();
  X509* cert = d2i_X509(nullptr, &p, static_cast<long>(der.size()));
  if (cert == nullptr) {
    throw Error(Errc::MalformedCertificate, "undecodable DER: " + last_ssl_error());
  }
  if (p != der.data() + der.size()) {
    X509_free(cert);
    throw Error(Errc::MalformedCertificate, "trailing bytes after certificate");
  }
  return Certificate(share(cert));
}

std::vector<Certificate> Certificate::all_from_pem(std::string_view pem) {
  auto bio = memory_bio(as_bytes(pem));
  std::vector<Certificate> out;
  while (X509* cert = PEM_read_bio_X509(bio.get(), nullptr, nullptr, nullptr)) {
    out.push_back(Certificate(share(cert)));
  }
  ERR_clear_error();  // the loop always ends on a "no start line" error
  return out;
}

Certificate Certificate::from_pem(std::string_view pem) {
  auto all = all_from_pem(pem);
  if (all.empty()) throw Error(Errc::MalformedCertificate, "no PEM certificate found");
  return all.front();
}

Certificate Certificate::load(const std::filesystem::path& path) {
  const Bytes data = read_file(path);
  return looks_like_pem(data) ? from_pem(as_chars(data)) : from_der(data);
}

Bytes Certificate::der() const {
  unsigned char* buf = nullptr;
  const int len = i2d_X509(cert_.get(), &buf);
  if (len < 0) throw Error(Errc::MalformedCertificate, last_ssl_error());
  Bytes out(buf, buf + len);
  OPENSSL_free(buf);
  return out;
}

std::string Certificate::pem() const {
  BioPtr bio(BIO_new(BIO_s_mem()));
  if (PEM_write_bio_X509(bio.get(), cert_.get()) != 1) {
    throw Error(Errc::MalformedCertificate, last_ssl_error());
  }
  return detail::drain(bio.get());
}

PublicKey Certificate::public_key() const {
  EVP_PKEY* key = X509_get_pubkey(cert_.get());
  if (key == nullptr) throw Error(Errc::MalformedCertificate, "no decodable public key");
  return PublicKey(share(key));
}

std::string Certificate::subject_organization() const {
  return name_entry(cert_.get(), NID_organizationName);
}
std::string Certificate::subject_common_name() const {
  return name_entry(cert_.get(), NID_commonName);
}

std::string Certificate::subject_line() const {
  BioPtr bio(BIO_new(BIO_s_mem()));
  X509_NAME_print_ex(bio.get(), X509_get_subject_name(cert_.get()), 0,
                     XN_FLAG_ONELINE & ~ASN1_STRFLGS_ESC_MSB);
  return detail::drain(bio.get());
}

EndorserIdentity extract_endorser(ByteView certificate_der) {
  const Certificate cert = Certificate::from_der(certificate_der);
  PublicKey key = cert.public_key();
  if (EVP_PKEY_get_base_id(key.get()) != EVP_PKEY_RSA) {
    throw Error(Errc::MalformedCertificate, "endorser key is not RSA");
  }
  std::string name = cert.subject_organization();
  if (name.empty()) name = cert.subject_common_name();
  if (name.empty()) name = cert.subject_line();
  return EndorserIdentity{std::move(name), std::move(key), cert.der()};
}

TrustStore TrustStore::from_directory(const std::filesystem::path& dir, ExpiryPolicy policy) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(Errc::FileNotFound, "trust directory " + dir.string());
  TrustStore store;
  store.policy = policy;
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& file : files) {
    const Bytes data = read_file(file);
    for (const auto& cert : Certificate::all_from_pem(as_chars(data))) store.add(cert);
  }
  return store;
}

namespace {

// 0 on success, otherwise the X509_V_ERR code.
int run_chain_check(const Certificate& leaf, const TrustStore& trust, bool check_time,
                    std::string& detail) {
  std::unique_ptr<X509_STORE, detail::StoreFree> store(X509_STORE_new());
  for (const auto& der : trust.roots) {
    try {
      const Certificate root = Certificate::from_der(der);
      X509_STORE_add_cert(store.get(), root.get());
    } catch (const Error&) {
      // Undecodable roots simply anchor nothing.
    }
  }
  if (!check_time) X509_STORE_set_flags(store.get(), X509_V_FLAG_NO_CHECK_TIME);
  std::unique_ptr<X509_STORE_CTX, detail::StoreCtxFree> ctx(X509_STORE_CTX_new());
  if (X509_STORE_CTX_init(ctx.get(), store.get(), leaf.get(), nullptr) != 1) {
    detail = last_ssl_error();
    return X509_V_ERR_UNSPECIFIED;
  }
  if (X509_verify_cert(ctx.get()) == 1) return 0;
  const int err = X509_STORE_CTX_get_error(ctx.get());
  detail = X509_verify_cert_error_string(err);
  ERR_clear_error();
  return err == 0 ? X509_V_ERR_UNSPECIFIED : err;
}

bool is_time_error(int err) {
  return err == X509_V_ERR_CERT_HAS_EXPIRED || err == X509_V_ERR_CERT_NOT_YET_VALID;
}

}  // namespace

ChainCheck check_chain(const Certificate& leaf, const TrustStore& trust) {
  ChainCheck result;
  if (trust.empty()) {
    result.detail = "trust store is empty";
    return result;
  }
  std::string detail;
  const int err = run_chain_check(leaf, trust, true, detail);
  if (err == 0) {
    result.trusted = true;
    return result;
  }
  if (is_time_error(err) && trust.policy == ExpiryPolicy::WarnOnExpiry) {
    std::string ignored;
    if (run_chain_check(leaf, trust, false, ignored) == 0) {
      result.trusted = true;
      result.expiry_warning = true;
      result.detail = "certificate time validity: " + detail;
      return result;
    }
  }
  result.detail = "certificate chain rejected: " + detail;
  return result;
}

// Builds certificates for the demo PKI. Friend of Certificate.
class DemoIssuer {
 public:
  static Certificate issue(const PrivateKey& subject_key, const std::string& organization,
                           const std::string& common_name, const X509* issuer_cert,
                           const PrivateKey& issuer_key, long not_before, long not_after,
                           bool is_ca, const std::vector<std::string>& dns_names) {
    X509* raw = X509_new();
    if (raw == nullptr) throw Error(Errc::IoError, last_ssl_error());
    auto cert = share(raw);
    X509_set_version(raw, 2);

    unsigned char serial_bytes[16];
    RAND_bytes(serial_bytes, sizeof serial_bytes);
    serial_bytes[0] &= 0x7f;
    BIGNUM* serial_bn = BN_bin2bn(serial_bytes, sizeof serial_bytes, nullptr);
    BN_to_ASN1_INTEGER(serial_bn, X509_get_serialNumber(raw));
    BN_free(serial_bn);

    X509_gmtime_adj(X509_getm_notBefore(raw), not_before);
    X509_gmtime_adj(X509_getm_notAfter(raw), not_after);

    X509_NAME* name = X509_get_subject_name(raw);
    auto add_entry = [name](const char* field, const std::string& value) {
      X509_NAME_add_entry_by_txt(name, field, MBSTRING_UTF8,
                                 reinterpret_cast<const unsigned char*>(value.c_str()), -1, -1, 0);
    };
    if (!organization.empty()) add_entry("O", organization);
    add_entry("CN", common_name);
    X509_set_issuer_name(raw, issuer_cert ? X509_get_subject_name(issuer_cert) : name);
    X509_set_pubkey(raw, subject_key.get());

    X509V3_CTX ctx;
    X509V3_set_ctx_nodb(&ctx);
    X509V3_set_ctx(&ctx, issuer_cert ? const_cast<X509*>(issuer_cert) : raw, raw, nullptr,
                   nullptr, 0);
    auto add_ext = [&](int nid, const std::string& value) {
      X509_EXTENSION* ext = X509V3_EXT_conf_nid(nullptr, &ctx, nid, value.c_str());
      if (ext == nullptr) throw Error(Errc::IoError, "extension: " + last_ssl_error());
      X509_add_ext(raw, ext, -1);
      X509_EXTENSION_free(ext);
    };
    add_ext(NID_basic_constraints, is_ca ? "critical,CA:TRUE" : "critical,CA:FALSE");
    add_ext(NID_key_usage, is_ca ? "critical,keyCertSign,cRLSign"
                                 : "critical,digitalSignature,keyEncipherment");
    add_ext(NID_subject_key_identifier, "hash");
    if (issuer_cert != nullptr) add_ext(NID_authority_key_identifier, "keyid:always");
    if (!dns_names.empty()) {
      std::string san;
      for (const auto& dns : dns_names) {
        const bool ip = dns.find_first_not_of("0123456789.") == std::string::npos;
        san += std::string(san.empty() ? "" : ",") + (ip ? "IP:" : "DNS:") + dns;
      }
      add_ext(NID_subject_alt_name, san);
    }

    if (X509_sign(raw, issuer_key.get(), EVP_sha256()) == 0) {
      throw Error(Errc::IoError, "certificate signing failed: " + last_ssl_error());
    }
    return Certificate(cert);
  }
};

DemoChain issue_demo_chain(std::string_view endorser_name, const DemoChainOptions& options) {
  if (endorser_name.empty()) throw Error(Errc::InvalidArgument, "endorser name must not be empty");
  const std::string name(endorser_name);
  constexpr long kHour = 3600;
  constexpr long kTenYears = 10L * 365 * 24 * kHour;

  PrivateKey root_key = PrivateKey::generate(options.key_bits);
  Certificate root = DemoIssuer::issue(root_key, name + " Demo Root CA", name + " Demo Root CA",
                                       nullptr, root_key, -kHour, kTenYears, true, {});

  PrivateKey leaf_key = PrivateKey::generate(options.key_bits);
  const long not_before = static_cast<long>(options.not_before_offset.count());
  const long not_after = not_before + static_cast<long>(options.validity.count());
  Certificate leaf = DemoIssuer::issue(leaf_key, options.organization_subject ? name : "", name,
                                       root.get(), root_key, not_before, not_after, false,
                                       options.dns_names);
  return DemoChain{std::move(root), std::move(leaf), std::move(leaf_key), std::move(root_key)};
}

}  // namespace mediacert

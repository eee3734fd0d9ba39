#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mediacert/bytes.hpp"

// Forward declarations keep OpenSSL headers out of the public surface.
struct evp_pkey_st;
struct x509_st;

namespace mediacert {

/// Minimum accepted RSA modulus size in bits.
inline constexpr int kMinRsaBits = 2048;

class PublicKey {
 public:
  explicit PublicKey(std::shared_ptr<evp_pkey_st> key) : key_(std::move(key)) {}
  int bits() const;
  std::string to_pem() const;
  bool operator==(const PublicKey& other) const;
  evp_pkey_st* get() const noexcept { return key_.get(); }

 private:
  std::shared_ptr<evp_pkey_st> key_;
};

/// Shared, immutable RSA private key.
class PrivateKey {
 public:
  /// Accepts PEM (PKCS#8 or traditional RSA) or DER. Throws Error(InvalidKey)
  /// for undecodable input, non-RSA keys, or moduli below kMinRsaBits.
  static PrivateKey from_bytes(ByteView encoded);
  static PrivateKey load(const std::filesystem::path& path);
  /// Generates a fresh RSA key. Sizes below kMinRsaBits are allowed here so
  /// tests can build keys that the signer must reject.
  static PrivateKey generate(int bits = kMinRsaBits);

  int bits() const;
  std::string to_pem() const;
  std::string public_pem() const;
  /// Shares the key; only the public half is used by PublicKey.
  PublicKey public_key() const { return PublicKey(key_); }
  evp_pkey_st* get() const noexcept { return key_.get(); }

 private:
  explicit PrivateKey(std::shared_ptr<evp_pkey_st> key) : key_(std::move(key)) {}
  friend PrivateKey unchecked_private_key(ByteView encoded);
  std::shared_ptr<evp_pkey_st> key_;
};

/// Decodes a private key without the RSA size policy. Used to show the
/// policy rejects small keys with InvalidKey rather than failing earlier.
PrivateKey unchecked_private_key(ByteView encoded);


class Certificate {
 public:
  /// Throws Error(MalformedCertificate).
  static Certificate from_der(ByteView der);
  /// First certificate in a PEM bundle. Throws Error(MalformedCertificate).
  static Certificate from_pem(std::string_view pem);
  /// Every certificate in a PEM bundle, in file order.
  static std::vector<Certificate> all_from_pem(std::string_view pem);
  /// PEM or DER file; PEM bundles yield their first certificate.
  static Certificate load(const std::filesystem::path& path);

  Bytes der() const;
  std::string pem() const;
  PublicKey public_key() const;
  std::string subject_organization() const;
  std::string subject_common_name() const;
  std::string subject_line() const;
  x509_st* get() const noexcept { return cert_.get(); }

  bool operator==(const Certificate& other) const { return der() == other.der(); }

 private:
  explicit Certificate(std::shared_ptr<x509_st> cert) : cert_(std::move(cert)) {}
  friend class DemoIssuer;
  std::shared_ptr<x509_st> cert_;
};

/// Who endorsed an asset, as read from the embedded certificate.
struct EndorserIdentity {
  std::string display_name;  // subject O, else CN, else the full subject line
  PublicKey public_key;
  Bytes certificate_der;
};

/// Parses an X.509 certificate and returns its endorser identity. Throws
/// Error(MalformedCertificate) for undecodable DER or a non-RSA key.
EndorserIdentity extract_endorser(ByteView certificate_der);

enum class ExpiryPolicy { Strict, WarnOnExpiry };

struct TrustStore {
  std::vector<Bytes> roots;  // DER
  ExpiryPolicy policy = ExpiryPolicy::WarnOnExpiry;

  void add(const Certificate& root) { roots.push_back(root.der()); }
  bool empty() const noexcept { return roots.empty(); }

  /// Loads every PEM certificate found in regular files under `dir`.
  /// Throws Error(FileNotFound) if the directory does not exist.
  static TrustStore from_directory(const std::filesystem::path& dir,
                                   ExpiryPolicy policy = ExpiryPolicy::WarnOnExpiry);
};

struct ChainCheck {
  bool trusted = false;
  bool expiry_warning = false;
  std::string detail;
};

/// Validates `leaf` up to one of the trust store's roots under its expiry policy.
ChainCheck check_chain(const Certificate& leaf, const TrustStore& trust);

struct DemoChainOptions {
  int key_bits = kMinRsaBits;
  /// Leaf validity window relative to now.
  std::chrono::seconds not_before_offset{-std::chrono::hours(1)};
  std::chrono::seconds validity{std::chrono::hours(24 * 365)};
  /// When false the leaf subject carries only CN=<name>.
  bool organization_subject = true;
  /// subjectAltName DNS entries on the leaf (used for the demo TLS mode).
  std::vector<std::string> dns_names;
};

struct DemoChain {
  Certificate root;
  Certificate endorser;
  PrivateKey endorser_key;
  PrivateKey root_key;
};

/// Self-signed root CA plus an endorser certificate (O = endorser_name) it
/// issued. Throws Error(InvalidArgument) for an empty name.
DemoChain issue_demo_chain(std::string_view endorser_name, const DemoChainOptions& options = {});

}  // namespace mediacert

#pragma once

#include <openssl/evp.h>
#include <openssl/rsa.h>

#include <functional>

#include "mediacert/endorsement.hpp"
#include "mediacert/error.hpp"
#include "openssl_util.hpp"

namespace mediacert {

namespace detail {

/// Incremental SHA-256.
class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw Error(Errc::IoError, "SHA-256 init: " + last_ssl_error());
    }
  }
  void update(ByteView data) { EVP_DigestUpdate(ctx_.get(), data.data(), data.size()); }
  Digest finish() {
    Digest::Value out{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), out.data(), &len);
    return Digest(out);
  }

 private:
  MdCtxPtr ctx_;
};

/// Incremental RSASSA-PKCS1-v1_5 / SHA-256 verification.
class SignatureCheck {
 public:
  explicit SignatureCheck(evp_pkey_st* key) : ctx_(EVP_MD_CTX_new()) {
    EVP_PKEY_CTX* pctx = nullptr;
    if (!ctx_ || EVP_DigestVerifyInit(ctx_.get(), &pctx, EVP_sha256(), nullptr, key) != 1 ||
        EVP_PKEY_CTX_set_rsa_padding(pctx, RSA_PKCS1_PADDING) <= 0) {
      throw Error(Errc::InvalidKey, "verify init: " + last_ssl_error());
    }
  }
  void update(ByteView data) { EVP_DigestVerifyUpdate(ctx_.get(), data.data(), data.size()); }
  bool finish(ByteView signature) {
    const int rc = EVP_DigestVerifyFinal(ctx_.get(), signature.data(), signature.size());
    ERR_clear_error();
    return rc == 1;
  }

 private:
  MdCtxPtr ctx_;
};

inline SignatureValue sign_preimage(const PrivateKey& key,
                             const std::function<void(PreimageStream::Sink)>& produce) {
  if (EVP_PKEY_get_base_id(key.get()) != EVP_PKEY_RSA || key.bits() < kMinRsaBits) {
    throw Error(Errc::InvalidKey, "signing requires an RSA key of at least " +
                                      std::to_string(kMinRsaBits) + " bits");
  }
  MdCtxPtr ctx(EVP_MD_CTX_new());
  EVP_PKEY_CTX* pctx = nullptr;
  if (!ctx || EVP_DigestSignInit(ctx.get(), &pctx, EVP_sha256(), nullptr, key.get()) != 1 ||
      EVP_PKEY_CTX_set_rsa_padding(pctx, RSA_PKCS1_PADDING) <= 0) {
    throw Error(Errc::InvalidKey, "sign init: " + last_ssl_error());
  }
  produce([&](ByteView data) { EVP_DigestSignUpdate(ctx.get(), data.data(), data.size()); });
  std::size_t len = 0;
  EVP_DigestSignFinal(ctx.get(), nullptr, &len);
  Bytes sig(len);
  if (EVP_DigestSignFinal(ctx.get(), sig.data(), &len) != 1) {
    throw Error(Errc::InvalidKey, "sign: " + last_ssl_error());
  }
  sig.resize(len);
  return SignatureValue{std::move(sig)};
}

}  // namespace detail

}  // namespace mediacert

#include "climalens/hashing.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <memory>

#include "climalens/csvio.hpp"
#include "climalens/errors.hpp"

namespace climalens {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw Error("sha256 digest failed");

    std::string hex(len * 2, '0');
    static const char* alphabet = "0123456789abcdef";
    for (unsigned int i = 0; i < len; ++i) {
        hex[2 * i] = alphabet[digest[i] >> 4];
        hex[2 * i + 1] = alphabet[digest[i] & 0xf];
    }
    return hex;
}

std::string sha256_file(const std::string& path) {
    return sha256_hex(read_file(path));
}

}  // namespace climalens

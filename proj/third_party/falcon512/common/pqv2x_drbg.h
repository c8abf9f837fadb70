#ifndef PQV2X_DRBG_H
#define PQV2X_DRBG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Reseed the deterministic DRBG backing PQCLEAN_randombytes. */
void pqv2x_drbg_seed(const uint8_t *seed, size_t seed_len);

#ifdef __cplusplus
}
#endif

#endif

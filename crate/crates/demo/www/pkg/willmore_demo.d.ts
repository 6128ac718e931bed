/* tslint:disable */
/* eslint-disable */

/**
 * Metric factor and curvature of the collar around a geodesic of length `l`.
 */
export function collarProfile(l: number, n: number): string;

/**
 * Closed-form residue `c1` along the Hopf torus of an elastica.
 */
export function hopfResidue(k0: number, dk0: number, length: number, samples: number): string;

/**
 * `‖f‖_{p,q}` of the step function with the given values and cell weights.
 */
export function lorentzNorm(values: Float64Array, weights: Float64Array, p: number, q: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly collarProfile: (a: number, b: number) => [number, number, number, number];
    readonly hopfResidue: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly lorentzNorm: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;

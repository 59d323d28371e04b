/* tslint:disable */
/* eslint-disable */

/**
 * Elliptope value, placement and correlation-matrix eigenvalues of a triple.
 */
export function classify_triple(a: number, b: number, c: number): string;

/**
 * Boundary points of the elliptope.
 */
export function elliptope_mesh(grid: number): string;

/**
 * Sampled LHV raffle region: drawn cloud, hull and coverage.
 */
export function raffle_region(k: number, zero_sum: boolean, samples: number, mc: number, seed: number): string;

/**
 * Measurement directions on the spin singlet reproducing a triple.
 */
export function saturate(spin: string, a: number, b: number, c: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly classify_triple: (a: number, b: number, c: number) => [number, number, number, number];
    readonly elliptope_mesh: (a: number) => [number, number, number, number];
    readonly raffle_region: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly saturate: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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

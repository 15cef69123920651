/* tslint:disable */
/* eslint-disable */

export function bench_text(n_sv: number, n_features: number, stages: number): string;

export function cascade_grid(seed_1: bigint, threshold_1: number, seed_2: bigint, threshold_2: number, n_sv: number, resolution: number): Uint8Array;

export function decision_margins(n_sv: number, seed: bigint, resolution: number): Float32Array;

export function latency_curves(n_max: number, n_features: number, clock_mhz: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly bench_text: (a: number, b: number, c: number) => [number, number, number, number];
    readonly cascade_grid: (a: bigint, b: number, c: bigint, d: number, e: number, f: number) => [number, number, number, number];
    readonly decision_margins: (a: number, b: bigint, c: number) => [number, number, number, number];
    readonly latency_curves: (a: number, b: number, c: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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

/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const bench_text: (a: number, b: number, c: number) => [number, number, number, number];
export const cascade_grid: (a: bigint, b: number, c: bigint, d: number, e: number, f: number) => [number, number, number, number];
export const decision_margins: (a: number, b: bigint, c: number) => [number, number, number, number];
export const latency_curves: (a: number, b: number, c: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;

/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const demo_accuracy: (a: number, b: number) => number;
export const demo_explore: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const demo_heatmap_height: (a: number) => number;
export const demo_heatmap_rgba: (a: number) => [number, number];
export const demo_heatmap_width: (a: number) => number;
export const demo_microcolumns: (a: number) => number;
export const demo_new: (a: number, b: number, c: number) => [number, number, number];
export const demo_predict: (a: number, b: number, c: number, d: number) => [number, number, number];
export const demo_samples_seen: (a: number) => number;
export const demo_train: (a: number, b: number) => [number, number, number];
export const encode_preview: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const sample_digit: (a: number, b: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;

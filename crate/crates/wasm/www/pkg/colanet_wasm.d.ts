/* tslint:disable */
/* eslint-disable */

/**
 * A small network with its synthetic training stream.
 */
export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Accuracy on `n` held-out digits drawn from a separate stream.
     */
    accuracy(n: number): number;
    /**
     * Replays one presentation of `pixels` with the learned weights but a
     * different `alpha`. Returns `[threshold, firing time]` per neuron
     * (column-major order); the time is -1 for neurons that never reach
     * threshold. Inhibition is ignored so every neuron's crossing shows.
     */
    explore(pixels: Uint8Array, alpha: number, seed: number): Float64Array;
    heatmap_height(): number;
    /**
     * Receptive fields as RGBA, ready for `ImageData`.
     */
    heatmap_rgba(): Uint8Array;
    heatmap_width(): number;
    microcolumns(): number;
    constructor(microcolumns: number, alpha: number, seed: number);
    /**
     * Predicted class, or -1 when no neuron fired.
     */
    predict(pixels: Uint8Array, seed: number): number;
    samples_seen(): number;
    /**
     * Trains on `samples` fresh digits; returns how many were already
     * classified correctly before their update.
     */
    train(samples: number): number;
}

/**
 * Spike raster of one presentation: `steps_active + steps_silent` frames of
 * 784 bytes, 1 where the input fired.
 */
export function encode_preview(pixels: Uint8Array, steps_active: number, steps_silent: number, seed: number): Uint8Array;

/**
 * A sample digit for the drawing canvas.
 */
export function sample_digit(digit: number, seed: number): Uint8Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_accuracy: (a: number, b: number) => number;
    readonly demo_explore: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly demo_heatmap_height: (a: number) => number;
    readonly demo_heatmap_rgba: (a: number) => [number, number];
    readonly demo_heatmap_width: (a: number) => number;
    readonly demo_microcolumns: (a: number) => number;
    readonly demo_new: (a: number, b: number, c: number) => [number, number, number];
    readonly demo_predict: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly demo_samples_seen: (a: number) => number;
    readonly demo_train: (a: number, b: number) => [number, number, number];
    readonly encode_preview: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly sample_digit: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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

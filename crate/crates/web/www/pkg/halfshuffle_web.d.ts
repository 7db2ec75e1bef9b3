/* tslint:disable */
/* eslint-disable */

/**
 * Hall factorization of a word and its dual basis element written with
 * Hall integrals. `order` is `lyndon` or `degree-lex`.
 */
export function dual(word: string, order: string): string;

/**
 * Identity names accepted by [`identity`], one per line.
 */
export function identities(): string;

/**
 * Residual of a named identity on arguments separated by `;`.
 */
export function identity(name: string, args: string): string;

/**
 * `op` is one of `shuffle`, `half-shuffle`, `area`, `concatenation`, `bracket`.
 */
export function product(op: string, f: string, g: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly dual: (a: number, b: number, c: number, d: number) => [number, number];
    readonly identities: () => [number, number];
    readonly identity: (a: number, b: number, c: number, d: number) => [number, number];
    readonly product: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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

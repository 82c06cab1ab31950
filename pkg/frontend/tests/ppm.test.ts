import { describe, expect, it } from 'vitest';

import { decodePpm, pixelAt } from '../src/ppm.js';

const TINY = 'P3\n2 2\n255\n255 0 0 0 255 0\n0 0 255 10 20 30\n';

describe('decodePpm', () => {
  it('decodes a small P3 image', () => {
    const image = decodePpm(TINY);
    expect(image).not.toBeNull();
    expect(image!.width).toBe(2);
    expect(image!.height).toBe(2);
    expect(pixelAt(image!, 0, 0)).toEqual([255, 0, 0]);
    expect(pixelAt(image!, 1, 0)).toEqual([0, 255, 0]);
    expect(pixelAt(image!, 0, 1)).toEqual([0, 0, 255]);
    expect(pixelAt(image!, 1, 1)).toEqual([10, 20, 30]);
  });

  it('decodes byte input and sets opaque alpha', () => {
    const image = decodePpm(new TextEncoder().encode(TINY));
    expect(image!.rgba[3]).toBe(255);
    expect(image!.rgba.length).toBe(2 * 2 * 4);
  });

  it('skips comments', () => {
    const image = decodePpm('P3 # magic\n# a comment line\n1 1\n255\n7 8 9\n');
    expect(pixelAt(image!, 0, 0)).toEqual([7, 8, 9]);
  });

  it('scales non-255 maxval', () => {
    const image = decodePpm('P3\n1 1\n100\n100 50 0\n');
    expect(pixelAt(image!, 0, 0)).toEqual([255, 128, 0]);
  });

  it('rejects truncated data', () => {
    expect(decodePpm('P3\n2 2\n255\n255 0 0\n')).toBeNull();
  });

  it('rejects wrong magic', () => {
    expect(decodePpm('P6\n1 1\n255\n0 0 0\n')).toBeNull();
  });

  it('rejects out-of-range samples and garbage', () => {
    expect(decodePpm('P3\n1 1\n255\n300 0 0\n')).toBeNull();
    expect(decodePpm('P3\n1 1\n255\nred green blue\n')).toBeNull();
    expect(decodePpm('')).toBeNull();
  });

  it('is deterministic for identical bytes', () => {
    const a = decodePpm(TINY);
    const b = decodePpm(TINY);
    expect(a).toEqual(b);
  });
});

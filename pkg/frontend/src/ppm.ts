// Client-side decoder for the ASCII PPM (P3) screenshots the service serves.
// Returns null for anything malformed so callers can show a placeholder.

export interface DecodedImage {
  width: number;
  height: number;
  rgba: Uint8ClampedArray;
}

function stripComments(text: string): string {
  return text.replace(/#[^\n]*/g, ' ');
}

export function decodePpm(data: Uint8Array | ArrayBuffer | string): DecodedImage | null {
  let text: string;
  if (typeof data === 'string') {
    text = data;
  } else {
    const bytes = data instanceof Uint8Array ? data : new Uint8Array(data);
    text = new TextDecoder('ascii').decode(bytes);
  }
  const tokens = stripComments(text).split(/\s+/).filter((t) => t.length > 0);
  if (tokens.length < 4 || tokens[0] !== 'P3') return null;

  const width = Number(tokens[1]);
  const height = Number(tokens[2]);
  const maxval = Number(tokens[3]);
  if (!Number.isInteger(width) || !Number.isInteger(height) || !Number.isInteger(maxval)) return null;
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535) return null;

  const expected = width * height * 3;
  if (tokens.length - 4 < expected) return null;

  const rgba = new Uint8ClampedArray(width * height * 4);
  for (let i = 0; i < width * height; i++) {
    for (let c = 0; c < 3; c++) {
      const value = Number(tokens[4 + i * 3 + c]);
      if (!Number.isInteger(value) || value < 0 || value > maxval) return null;
      rgba[i * 4 + c] = maxval === 255 ? value : Math.round((value * 255) / maxval);
    }
    rgba[i * 4 + 3] = 255;
  }
  return { width, height, rgba };
}

export function pixelAt(image: DecodedImage, x: number, y: number): [number, number, number] {
  const offset = (y * image.width + x) * 4;
  return [image.rgba[offset], image.rgba[offset + 1], image.rgba[offset + 2]];
}
